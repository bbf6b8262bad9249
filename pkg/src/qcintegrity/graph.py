"""Labeled dependency DAG over circuit operations, with semantic node features.

Edges chain each operation to the next operation sharing a qubit (last-writer
chaining), one edge per shared qubit.  Nodes carry a 6-dimensional feature
vector summarizing gate family, parameters, and unitary structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .circuit import (
    Circuit,
    GATE_KINDS,
    GateKind,
    Operation,
    gate_unitary,
)
from .errors import UnsupportedGateError

_TWO_PI = 2.0 * math.pi

_KIND_ORDINAL = {kind: i for i, kind in enumerate(GATE_KINDS)}


@lru_cache(maxsize=8192)
def _fingerprint_cached(kind: GateKind, params: tuple[float, ...]) -> tuple[float, ...]:
    u = gate_unitary(kind, params)
    arity = round(math.log2(u.shape[0]))
    f1 = _KIND_ORDINAL[kind] / len(GATE_KINDS)
    f2 = arity / 3.0
    f3 = (math.fsum(params) % _TWO_PI) / _TWO_PI if params else 0.0
    f4 = float(np.mean(np.abs(u.real)))
    f5 = float(np.mean(np.abs(u.imag)))
    f6 = float(abs(np.trace(u))) / u.shape[0]
    return (f1, f2, f3, f4, f5, f6)


def unitary_fingerprint(op: Operation) -> tuple[float, ...]:
    """6-vector of semantic features for a unitary operation."""
    if not op.is_unitary:
        raise UnsupportedGateError(f"{op.kind} has no unitary fingerprint")
    return _fingerprint_cached(op.kind, op.params)


@dataclass(frozen=True)
class InteractionNode:
    op_index: int
    gate_family: GateKind
    qubits: tuple[int, ...]
    fingerprint: tuple[float, ...]


@dataclass(frozen=True)
class InteractionGraph:
    num_qubits: int
    nodes: tuple[InteractionNode, ...]
    edges: tuple[tuple[int, int, int], ...]  # (producer op_index, consumer, qubit)
    qubit_usage: tuple[int, ...]
    pair_histogram: dict[frozenset, float]
    per_qubit_sequences: tuple[tuple[GateKind, ...], ...]


def build_interaction_graph(circuit: Circuit) -> InteractionGraph:
    """DAG over unitary ops via shared-qubit last-writer chaining."""
    nodes: list[InteractionNode] = []
    edges: list[tuple[int, int, int]] = []
    usage = [0] * circuit.num_qubits
    sequences: list[list[GateKind]] = [[] for _ in range(circuit.num_qubits)]
    pair_counts: dict[frozenset, int] = {}
    last_on_qubit: dict[int, int] = {}
    for idx, op in enumerate(circuit.ops):
        if not op.is_unitary:
            continue
        nodes.append(
            InteractionNode(idx, op.kind, op.qubits, unitary_fingerprint(op))
        )
        for q in op.qubits:
            if q in last_on_qubit:
                edges.append((last_on_qubit[q], idx, q))
            last_on_qubit[q] = idx
            usage[q] += 1
            sequences[q].append(op.kind)
        if len(op.qubits) >= 2:
            qs = op.qubits
            for i in range(len(qs)):
                for j in range(i + 1, len(qs)):
                    key = frozenset((qs[i], qs[j]))
                    pair_counts[key] = pair_counts.get(key, 0) + 1
    total = sum(pair_counts.values())
    pair_hist = {k: v / total for k, v in pair_counts.items()} if total else {}
    return InteractionGraph(
        num_qubits=circuit.num_qubits,
        nodes=tuple(nodes),
        edges=tuple(edges),
        qubit_usage=tuple(usage),
        pair_histogram=pair_hist,
        per_qubit_sequences=tuple(tuple(s) for s in sequences),
    )


_GRAPH_CACHE: dict[tuple, InteractionGraph] = {}


def cached_interaction_graph(circuit: Circuit) -> InteractionGraph:
    """Per-circuit graph cache; idempotent values make races harmless."""
    key = (circuit.name, circuit.num_qubits, circuit.ops)
    graph = _GRAPH_CACHE.get(key)
    if graph is None:
        graph = build_interaction_graph(circuit)
        _GRAPH_CACHE[key] = graph
    return graph


def to_dot(graph: InteractionGraph) -> str:
    """DOT-format debug export (nodes `idx:family`, edges labeled by qubit)."""
    lines = ["digraph interaction {"]
    for node in graph.nodes:
        lines.append(f'  n{node.op_index} [label="{node.op_index}:{node.gate_family}"];')
    for src, dst, q in graph.edges:
        lines.append(f'  n{src} -> n{dst} [label="q{q}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
