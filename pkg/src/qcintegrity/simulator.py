"""Dense statevector simulation of supported circuits.

Measurement semantics are terminal: every measure op is interpreted as part of
one final projective readout.  A circuit with no measures gets an implicit
full measurement (clbit i <- qubit i).  Bitstring keys put classical bit 0 in
the rightmost character.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, GateKind, gate_unitary
from .errors import CapacityError, InternalConsistencyError

DEFAULT_QUBIT_CAP = 14

BIT_ORDER = "clbit0-rightmost"

_PROB_FLOOR = 1e-12
_NORM_TOL = 1e-9
_DRIFT_TOL = 1e-6


@dataclass(frozen=True)
class OutputDistribution:
    probs: dict[str, float]
    shots: int | None = None  # None means exact
    bit_order: str = BIT_ORDER

    @property
    def width(self) -> int:
        return len(next(iter(self.probs)))

    def __post_init__(self):
        widths = {len(k) for k in self.probs}
        if len(widths) > 1:
            raise ValueError(f"inconsistent bitstring widths: {sorted(widths)}")


def _measurement_map(circuit: Circuit) -> list[tuple[int, int]]:
    """(qubit, clbit) readout pairs; validates the terminal-measure contract."""
    pairs: list[tuple[int, int]] = []
    measured: set[int] = set()
    used_clbits: set[int] = set()
    for op in circuit.ops:
        if op.kind is GateKind.MEASURE:
            q, c = op.qubits[0], op.clbits[0]
            if c in used_clbits:
                raise InternalConsistencyError(f"clbit {c} measured twice")
            measured.add(q)
            used_clbits.add(c)
            pairs.append((q, c))
        elif op.kind is GateKind.BARRIER:
            continue
        else:
            clash = measured.intersection(op.qubits)
            if clash:
                raise InternalConsistencyError(
                    f"gate on measured qubit(s) {sorted(clash)}: "
                    "mid-circuit measurement is not supported"
                )
    if not pairs:
        pairs = [(q, q) for q in range(circuit.num_qubits)]
    return pairs


def run_statevector(circuit: Circuit) -> np.ndarray:
    """Final state as an ndarray of shape [2]*n, axis q = qubit q."""
    n = circuit.num_qubits
    state = np.zeros([2] * n if n else [1], dtype=complex)
    state.flat[0] = 1.0
    for op in circuit.ops:
        if not op.is_unitary:
            continue
        u = gate_unitary(op.kind, op.params)
        k = len(op.qubits)
        u = u.reshape([2] * (2 * k))
        axes = list(op.qubits)
        state = np.tensordot(u, state, axes=(list(range(k, 2 * k)), axes))
        state = np.moveaxis(state, list(range(k)), axes)
        norm_sq = float(np.vdot(state, state).real)
        if abs(norm_sq - 1.0) > _NORM_TOL:
            raise InternalConsistencyError(
                f"state norm drifted to {math.sqrt(norm_sq):.12f} after {op.kind}"
            )
    return state


def simulate_exact(circuit: Circuit, qubit_cap: int = DEFAULT_QUBIT_CAP) -> OutputDistribution:
    """Exact Born-rule probabilities over the measured bits."""
    if circuit.num_qubits > qubit_cap:
        raise CapacityError(
            f"circuit has {circuit.num_qubits} qubits, exceeding the "
            f"{qubit_cap}-qubit simulation cap"
        )
    pairs = _measurement_map(circuit)
    state = run_statevector(circuit)
    probs = np.abs(state) ** 2
    n = circuit.num_qubits
    measured_qubits = [q for q, _ in pairs]
    drop = [ax for ax in range(n) if ax not in measured_qubits]
    marginal = probs.sum(axis=tuple(drop)) if drop else probs
    # marginal axes follow measured_qubits order after the sum
    kept = [q for q in range(n) if q in measured_qubits]
    qubit_to_axis = {q: i for i, q in enumerate(kept)}
    total = float(marginal.sum())
    if abs(total - 1.0) > _DRIFT_TOL:
        raise InternalConsistencyError(f"probability mass {total} not normalizable")
    width = len(pairs)
    clbit_rank = {c: r for r, (_, c) in enumerate(sorted(pairs, key=lambda p: p[1]))}
    out: dict[str, float] = {}
    for index in np.ndindex(*marginal.shape):
        p = float(marginal[index])
        if p < _PROB_FLOOR:
            continue
        bits = ["0"] * width
        for q, c in pairs:
            bit = index[qubit_to_axis[q]]
            bits[width - 1 - clbit_rank[c]] = str(bit)
        out["".join(bits)] = out.get("".join(bits), 0.0) + p
    mass = sum(out.values())
    if abs(mass - 1.0) <= _NORM_TOL and mass > 0:
        out = {k: v / mass for k, v in out.items()}
    return OutputDistribution(out, shots=None)


def sample_distribution(
    exact: OutputDistribution, shots: int, seed: int
) -> OutputDistribution:
    """Multinomial sample from an exact distribution, as empirical frequencies."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    keys = sorted(exact.probs)
    p = np.array([exact.probs[k] for k in keys])
    p = p / p.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, p)
    probs = {k: int(c) / shots for k, c in zip(keys, counts) if c > 0}
    return OutputDistribution(probs, shots=shots)


def simulate_sampled(
    circuit: Circuit,
    shots: int,
    seed: int,
    qubit_cap: int = DEFAULT_QUBIT_CAP,
) -> OutputDistribution:
    """Shot-sampled output distribution; deterministic for a fixed seed."""
    return sample_distribution(simulate_exact(circuit, qubit_cap), shots, seed)
