"""Controlled anomaly injection: eight perturbation kinds, fixed or
severity-scaled, deterministic under a seed.

Severity semantics: n = max(1, round(s * eligible_sites)).  Seed streams are
derived from stable string identifiers via SHA-256 so results are independent
of execution order and host.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circuit import Circuit, GateKind, Operation, gate_unitary
from .errors import IneligibilityError

ANOMALY_KINDS = (
    "del_1q",
    "del_2q",
    "insert",
    "substitute",
    "reorder",
    "trojan_not",
    "trojan_h",
    "qubit_swap",
)

SUBSTITUTION_TABLE = {
    GateKind.X: GateKind.Y,
    GateKind.Y: GateKind.X,
    GateKind.Z: GateKind.H,
    GateKind.H: GateKind.Z,
    GateKind.S: GateKind.T,
    GateKind.T: GateKind.S,
    GateKind.SDG: GateKind.TDG,
    GateKind.TDG: GateKind.SDG,
    GateKind.RX: GateKind.RY,
    GateKind.RY: GateKind.RX,
    GateKind.CX: GateKind.CZ,
    GateKind.CZ: GateKind.CX,
}

_INSERT_POOL = (GateKind.X, GateKind.Y, GateKind.Z, GateKind.H, GateKind.S, GateKind.T)

_COMMUTE_TOL = 1e-9


@dataclass(frozen=True)
class AnomalySpec:
    kind: str
    mode: str = "fixed"  # "fixed" | "severity"
    severity: float | None = None
    seed: int = 42

    def __post_init__(self):
        if self.kind not in ANOMALY_KINDS:
            raise ValueError(f"unknown anomaly kind '{self.kind}'")
        if self.mode not in ("fixed", "severity"):
            raise ValueError(f"unknown mode '{self.mode}'")
        if self.mode == "severity":
            if self.severity is None or not 0.0 < self.severity <= 1.0:
                raise ValueError(f"severity must be in (0,1], got {self.severity}")


@dataclass(frozen=True)
class AnomalyLog:
    applied: tuple[tuple[int, str], ...]
    requested_count: int
    applied_count: int


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from any string/int identifiers."""
    h = hashlib.sha256("|".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(h[:8], "big")


def _joint_unitary(op_a: Operation, op_b: Operation, order: tuple[Operation, ...]):
    """Product of the two ops' unitaries embedded in their joint qubit space."""
    qubits = sorted(set(op_a.qubits) | set(op_b.qubits))
    pos = {q: i for i, q in enumerate(qubits)}
    n = len(qubits)
    total = np.eye(2**n, dtype=complex)
    for op in order:
        u = gate_unitary(op.kind, op.params).reshape([2] * (2 * len(op.qubits)))
        full = np.eye(2**n, dtype=complex).reshape([2] * (2 * n))
        axes = [pos[q] for q in op.qubits]
        k = len(axes)
        full = np.tensordot(u, full, axes=(list(range(k, 2 * k)), axes))
        full = np.moveaxis(full, list(range(k)), axes)
        total = full.reshape(2**n, 2**n) @ total
    return total


@lru_cache(maxsize=65536)
def _noncommuting(op_a: Operation, op_b: Operation) -> bool:
    ab = _joint_unitary(op_a, op_b, (op_b, op_a))
    ba = _joint_unitary(op_a, op_b, (op_a, op_b))
    return bool(np.max(np.abs(ab - ba)) > _COMMUTE_TOL)


def _unitary_indices(circuit: Circuit, pred) -> list[int]:
    return [
        i
        for i, op in enumerate(circuit.ops)
        if op.is_unitary and pred(op)
    ]


def _reorder_pairs(circuit: Circuit) -> list[int]:
    """Indices i such that ops[i], ops[i+1] are unitary, share a qubit and
    do not commute."""
    out = []
    ops = circuit.ops
    for i in range(len(ops) - 1):
        a, b = ops[i], ops[i + 1]
        if not (a.is_unitary and b.is_unitary):
            continue
        if not set(a.qubits) & set(b.qubits):
            continue
        if _noncommuting(a, b):
            out.append(i)
    return out


def eligible_sites(circuit: Circuit, kind: str) -> int:
    if kind == "del_1q":
        return len(_unitary_indices(circuit, lambda op: len(op.qubits) == 1))
    if kind == "del_2q":
        return len(_unitary_indices(circuit, lambda op: len(op.qubits) >= 2))
    if kind in ("insert", "trojan_not", "trojan_h"):
        return len(circuit.ops) + 1
    if kind == "substitute":
        return len(_unitary_indices(circuit, lambda op: op.kind in SUBSTITUTION_TABLE))
    if kind == "reorder":
        return len(_reorder_pairs(circuit))
    if kind == "qubit_swap":
        return len(circuit.ops) if circuit.num_qubits >= 2 else 0
    raise ValueError(f"unknown anomaly kind '{kind}'")


def _perturbation_count(spec: AnomalySpec, sites: int) -> int:
    if spec.mode == "fixed":
        return 1
    return max(1, round(spec.severity * sites))


def _trojan_target(ops: list[Operation], num_qubits: int) -> int:
    usage = [0] * num_qubits
    for op in ops:
        if op.is_unitary:
            for q in op.qubits:
                usage[q] += 1
    return min(range(num_qubits), key=lambda q: (usage[q], q))


def inject(circuit: Circuit, spec: AnomalySpec) -> tuple[Circuit, AnomalyLog]:
    """Apply one anomaly kind; deterministic for identical (circuit, spec)."""
    sites = eligible_sites(circuit, spec.kind)
    if sites == 0:
        raise IneligibilityError(spec.kind)
    rng = np.random.default_rng(spec.seed)
    n_requested = _perturbation_count(spec, sites)
    ops = list(circuit.ops)
    applied: list[tuple[int, str]] = []
    kind = spec.kind

    if kind in ("del_1q", "del_2q"):
        if kind == "del_1q":
            pool = _unitary_indices(circuit, lambda op: len(op.qubits) == 1)
        else:
            pool = _unitary_indices(circuit, lambda op: len(op.qubits) >= 2)
        count = min(n_requested, len(pool))
        chosen = sorted(rng.choice(len(pool), size=count, replace=False).tolist())
        for idx in [pool[i] for i in chosen]:
            applied.append((idx, f"deleted {ops[idx].kind} on {ops[idx].qubits}"))
        for idx in sorted((pool[i] for i in chosen), reverse=True):
            del ops[idx]

    elif kind == "insert":
        for _ in range(n_requested):
            pos = int(rng.integers(0, len(ops) + 1))
            gate = _INSERT_POOL[int(rng.integers(0, len(_INSERT_POOL)))]
            q = int(rng.integers(0, circuit.num_qubits))
            ops.insert(pos, Operation(gate, (q,)))
            applied.append((pos, f"inserted {gate} on qubit {q}"))

    elif kind == "substitute":
        pool = _unitary_indices(circuit, lambda op: op.kind in SUBSTITUTION_TABLE)
        count = min(n_requested, len(pool))
        chosen = rng.choice(len(pool), size=count, replace=False).tolist()
        for i in sorted(chosen):
            idx = pool[i]
            old = ops[idx]
            new_kind = SUBSTITUTION_TABLE[old.kind]
            ops[idx] = Operation(new_kind, old.qubits, old.params, old.clbits)
            applied.append((idx, f"substituted {old.kind} -> {new_kind}"))

    elif kind == "reorder":
        for _ in range(n_requested):
            current = Circuit(circuit.name, circuit.num_qubits, circuit.num_clbits, ops)
            pairs = _reorder_pairs(current)
            pairs = [i for i in pairs if not any(a[0] in (i, i + 1) for a in applied)]
            if not pairs:
                break
            i = pairs[int(rng.integers(0, len(pairs)))]
            ops[i], ops[i + 1] = ops[i + 1], ops[i]
            applied.append((i, f"swapped ops {i} and {i + 1}"))

    elif kind in ("trojan_not", "trojan_h"):
        gate = GateKind.X if kind == "trojan_not" else GateKind.H
        for _ in range(n_requested):
            target = _trojan_target(ops, circuit.num_qubits)
            pos = int(rng.integers(0, len(ops) + 1))
            ops.insert(pos, Operation(gate, (target,)))
            applied.append((pos, f"trojan {gate} on qubit {target}"))

    elif kind == "qubit_swap":
        if spec.mode == "fixed":
            window = 1
        else:
            window = max(1, round(spec.severity * len(ops)))
        pairs = [
            (a, b)
            for a in range(circuit.num_qubits)
            for b in range(a + 1, circuit.num_qubits)
        ]
        # one uniform draw anchors the window so windows nest across severities
        u = float(rng.random())
        start = int(u * (len(ops) - window + 1)) if len(ops) > window else 0
        order = rng.permutation(len(pairs)).tolist()
        done = False
        symmetric = (GateKind.CZ, GateKind.SWAP)
        for pi in order:
            a, b = pairs[pi]
            relabel = {a: b, b: a}
            touched = []
            effective = False
            for idx in range(start, start + window):
                op = ops[idx]
                new_qubits = tuple(relabel.get(q, q) for q in op.qubits)
                if new_qubits == op.qubits:
                    continue
                touched.append((idx, new_qubits))
                # relabeling both operands of a symmetric gate is a no-op
                if not (op.kind in symmetric and set(new_qubits) == set(op.qubits)):
                    effective = True
            if not effective:
                continue
            for idx, new_qubits in touched:
                op = ops[idx]
                ops[idx] = Operation(op.kind, new_qubits, op.params, op.clbits)
                applied.append((idx, f"relabeled qubits {a}<->{b} in {op.kind}"))
            done = True
            break
        if not done:
            raise IneligibilityError(kind, "no op in the swap window touches any pair")
        n_requested = window

    if not applied:
        raise IneligibilityError(kind)
    mutated = Circuit(circuit.name, circuit.num_qubits, circuit.num_clbits, tuple(ops))
    log = AnomalyLog(tuple(applied), n_requested, len(applied))
    return mutated, log
