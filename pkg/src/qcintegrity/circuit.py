"""In-memory circuit representation and gate semantics.

Gate operations act on 0-based flattened qubit indices.  Matrices follow the
convention that the first qubit in an operation's operand list is the most
significant bit of the matrix index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import UnsupportedGateError


class GateKind(str, Enum):
    X = "x"
    Y = "y"
    Z = "z"
    H = "h"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    U1 = "u1"
    U2 = "u2"
    U3 = "u3"
    CX = "cx"
    CZ = "cz"
    SWAP = "swap"
    CCX = "ccx"
    ID = "id"
    MEASURE = "measure"
    BARRIER = "barrier"

    def __str__(self):
        return self.value


GATE_KINDS = list(GateKind)

_TWO_QUBIT = {GateKind.CX, GateKind.CZ, GateKind.SWAP}

ARITY = {
    **{k: 1 for k in GateKind},
    GateKind.CX: 2,
    GateKind.CZ: 2,
    GateKind.SWAP: 2,
    GateKind.CCX: 3,
}
# measure/barrier arity is flexible; the table value is unused for them.

PARAM_ARITY = {
    **{k: 0 for k in GateKind},
    GateKind.RX: 1,
    GateKind.RY: 1,
    GateKind.RZ: 1,
    GateKind.U1: 1,
    GateKind.U2: 2,
    GateKind.U3: 3,
}


def is_unitary_kind(kind: GateKind) -> bool:
    return kind not in (GateKind.MEASURE, GateKind.BARRIER)


@dataclass(frozen=True)
class Operation:
    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    clbits: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        object.__setattr__(self, "clbits", tuple(self.clbits))
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"duplicate qubit operand in {self.kind}: {self.qubits}")
        if is_unitary_kind(self.kind):
            if len(self.qubits) != ARITY[self.kind]:
                raise ValueError(
                    f"{self.kind} expects {ARITY[self.kind]} qubits, got {len(self.qubits)}"
                )
            if len(self.params) != PARAM_ARITY[self.kind]:
                raise ValueError(
                    f"{self.kind} expects {PARAM_ARITY[self.kind]} params, got {len(self.params)}"
                )

    @property
    def is_unitary(self) -> bool:
        return is_unitary_kind(self.kind)


@dataclass(frozen=True)
class Circuit:
    name: str
    num_qubits: int
    num_clbits: int
    ops: tuple[Operation, ...]

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        for op in self.ops:
            for q in op.qubits:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(f"qubit index {q} out of range in {self.name}")
            for c in op.clbits:
                if not 0 <= c < self.num_clbits:
                    raise ValueError(f"clbit index {c} out of range in {self.name}")

    @property
    def unitary_ops(self) -> list[Operation]:
        return [op for op in self.ops if op.is_unitary]


@dataclass(frozen=True)
class StructuralProfile:
    gate_count: int
    depth: int
    two_qubit_count: int
    topo_signature: dict[frozenset, float] = field(default_factory=dict)


def structural_profile(circuit: Circuit) -> StructuralProfile:
    """Structural descriptors over the unitary ops (barriers/measures excluded)."""
    gate_count = 0
    two_qubit_count = 0
    pair_counts: dict[frozenset, int] = {}
    frontier = [0] * circuit.num_qubits
    depth = 0
    for op in circuit.ops:
        if not op.is_unitary:
            continue
        gate_count += 1
        if len(op.qubits) >= 2:
            two_qubit_count += 1
            qs = op.qubits
            for i in range(len(qs)):
                for j in range(i + 1, len(qs)):
                    key = frozenset((qs[i], qs[j]))
                    pair_counts[key] = pair_counts.get(key, 0) + 1
        level = 1 + max((frontier[q] for q in op.qubits), default=0)
        for q in op.qubits:
            frontier[q] = level
        depth = max(depth, level)
    total = sum(pair_counts.values())
    topo = {k: v / total for k, v in pair_counts.items()} if total else {}
    return StructuralProfile(gate_count, depth, two_qubit_count, topo)


_INV_SQRT2 = 1.0 / math.sqrt(2.0)

_FIXED_UNITARIES = {
    GateKind.ID: np.eye(2, dtype=complex),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _INV_SQRT2,
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.SDG: np.array([[1, 0], [0, -1j]], dtype=complex),
    GateKind.T: np.diag([1, np.exp(1j * math.pi / 4)]).astype(complex),
    GateKind.TDG: np.diag([1, np.exp(-1j * math.pi / 4)]).astype(complex),
    GateKind.CX: np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
    GateKind.CZ: np.diag([1, 1, 1, -1]).astype(complex),
    GateKind.SWAP: np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    ),
}

_CCX = np.eye(8, dtype=complex)
_CCX[[6, 7], :] = _CCX[[7, 6], :]
_FIXED_UNITARIES[GateKind.CCX] = _CCX


def _u3(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ],
        dtype=complex,
    )


@lru_cache(maxsize=4096)
def gate_unitary(kind: GateKind, params: tuple[float, ...] = ()) -> np.ndarray:
    """Standard unitary matrix for a gate kind (2^arity x 2^arity)."""
    if not is_unitary_kind(kind):
        raise UnsupportedGateError(f"{kind} has no unitary")
    if len(params) != PARAM_ARITY[kind]:
        raise ValueError(f"{kind} expects {PARAM_ARITY[kind]} params, got {len(params)}")
    if kind in _FIXED_UNITARIES:
        u = _FIXED_UNITARIES[kind]
    elif kind is GateKind.RX:
        t = params[0]
        c, s = math.cos(t / 2), math.sin(t / 2)
        u = np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    elif kind is GateKind.RY:
        t = params[0]
        c, s = math.cos(t / 2), math.sin(t / 2)
        u = np.array([[c, -s], [s, c]], dtype=complex)
    elif kind is GateKind.RZ:
        t = params[0]
        u = np.diag([np.exp(-1j * t / 2), np.exp(1j * t / 2)]).astype(complex)
    elif kind is GateKind.U1:
        u = np.diag([1, np.exp(1j * params[0])]).astype(complex)
    elif kind is GateKind.U2:
        phi, lam = params
        u = _u3(math.pi / 2, phi, lam)
    elif kind is GateKind.U3:
        u = _u3(*params)
    else:  # pragma: no cover
        raise UnsupportedGateError(f"no unitary defined for {kind}")
    u = np.asarray(u)
    u.setflags(write=False)
    return u
