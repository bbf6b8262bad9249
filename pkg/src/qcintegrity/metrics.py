"""Integrity metrics: structural (SIS), behavioral (OIS), interaction (IGS).

All scores live in [0,1]; 1 means indistinguishable from the reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import StructuralProfile
from .errors import ConfigurationError, IncompatibilityError
from .graph import InteractionGraph
from .simulator import OutputDistribution

SIS_DEFAULT_WEIGHTS = (0.25, 0.25, 0.25, 0.25)
IGS_DEFAULT_WEIGHTS = (0.15, 0.35, 0.20, 0.20, 0.10)

_FP_QUANT = 2  # decimal places for fingerprint histogram keys
_FP_EPS = 1e-9


def _check_weights(weights, n):
    if len(weights) != n:
        raise ConfigurationError(f"expected {n} weights, got {len(weights)}")
    if any(w < 0 for w in weights):
        raise ConfigurationError(f"negative weight in {weights}")
    if abs(sum(weights) - 1.0) > 1e-9:
        raise ConfigurationError(f"weights must sum to 1, got {sum(weights)}")


def _clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else x


def tv_distance(p: dict, q: dict) -> float:
    """Total-variation distance between two normalized histograms."""
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def _hist_tv_or_extreme(p: dict, q: dict) -> float:
    """TV distance with the empty-vs-nonempty convention: both empty -> 0,
    exactly one empty -> 1."""
    if not p and not q:
        return 0.0
    if not p or not q:
        return 1.0
    return tv_distance(p, q)


# ---------------------------------------------------------------------------
# SIS
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SisResult:
    sis: float
    delta_gate: float
    delta_depth: float
    delta_2q: float
    delta_topo: float
    weights: tuple[float, float, float, float]


def _rel_delta(x_ref: float, x_test: float) -> float:
    return min(1.0, abs(x_ref - x_test) / max(x_ref, 1.0))


def compute_sis(
    ref: StructuralProfile,
    test: StructuralProfile,
    weights=SIS_DEFAULT_WEIGHTS,
) -> SisResult:
    _check_weights(weights, 4)
    d_gate = _rel_delta(ref.gate_count, test.gate_count)
    d_depth = _rel_delta(ref.depth, test.depth)
    d_2q = _rel_delta(ref.two_qubit_count, test.two_qubit_count)
    d_topo = _hist_tv_or_extreme(ref.topo_signature, test.topo_signature)
    deltas = (d_gate, d_depth, d_2q, d_topo)
    sis = _clamp01(1.0 - math.fsum(w * d for w, d in zip(weights, deltas)))
    return SisResult(sis, d_gate, d_depth, d_2q, d_topo, tuple(weights))


# ---------------------------------------------------------------------------
# OIS
# ---------------------------------------------------------------------------


def _check_widths(p: OutputDistribution, q: OutputDistribution):
    if p.width != q.width:
        raise IncompatibilityError(
            f"distribution widths differ: {p.width} vs {q.width}"
        )


def kl_divergence(p: OutputDistribution, q: OutputDistribution) -> float:
    """Base-2 KL divergence; +inf when q misses mass where p has support."""
    _check_widths(p, q)
    total = 0.0
    for key, pv in p.probs.items():
        if pv <= 0.0:
            continue
        qv = q.probs.get(key, 0.0)
        if qv <= 0.0:
            return math.inf
        total += pv * math.log2(pv / qv)
    return max(total, 0.0)


def js_distance(p: OutputDistribution, q: OutputDistribution) -> float:
    """Jensen-Shannon distance (base 2), bounded in [0,1] and always finite."""
    _check_widths(p, q)
    keys = set(p.probs) | set(q.probs)
    div = 0.0
    for key in keys:
        pv = p.probs.get(key, 0.0)
        qv = q.probs.get(key, 0.0)
        m = 0.5 * (pv + qv)
        if pv > 0.0:
            div += 0.5 * pv * math.log2(pv / m)
        if qv > 0.0:
            div += 0.5 * qv * math.log2(qv / m)
    return math.sqrt(min(max(div, 0.0), 1.0))


@dataclass(frozen=True)
class OisResult:
    ois: float
    jsd: float
    support_union_size: int


def compute_ois(p_ref: OutputDistribution, q_test: OutputDistribution) -> OisResult:
    jsd = js_distance(p_ref, q_test)
    union = len(set(p_ref.probs) | set(q_test.probs))
    return OisResult(_clamp01(1.0 - jsd), jsd, union)


# ---------------------------------------------------------------------------
# IGS
# ---------------------------------------------------------------------------


def lcs_length(a, b) -> int:
    """Longest common subsequence length via the bit-parallel algorithm."""
    if not a or not b:
        return 0
    masks: dict = {}
    for j, sym in enumerate(b):
        masks[sym] = masks.get(sym, 0) | (1 << j)
    row = 0
    for sym in a:
        x = row | masks.get(sym, 0)
        row = x & ~(x - ((row << 1) | 1))
    return bin(row).count("1")


@dataclass(frozen=True)
class IgsResult:
    igs: float
    d_edge: float
    d_node: float
    d_order: float
    d_inter: float
    d_usage: float
    weights: tuple[float, float, float, float, float]


def _edge_histogram(graph: InteractionGraph) -> dict:
    family = {node.op_index: node.gate_family for node in graph.nodes}
    counts: dict = {}
    for src, dst, q in graph.edges:
        key = (family[src], family[dst], q)
        counts[key] = counts.get(key, 0) + 1
    total = sum(counts.values())
    return {k: v / total for k, v in counts.items()} if total else {}


def _node_histogram(graph: InteractionGraph) -> dict:
    counts: dict = {}
    for node in graph.nodes:
        key = (
            node.gate_family,
            tuple(round(f, _FP_QUANT) + 0.0 for f in node.fingerprint),
        )
        counts[key] = counts.get(key, 0) + 1
    total = sum(counts.values())
    return {k: v / total for k, v in counts.items()} if total else {}


def _d_node(ref: InteractionGraph, test: InteractionGraph) -> float:
    hist_term = _hist_tv_or_extreme(_node_histogram(ref), _node_histogram(test))
    m = min(len(ref.nodes), len(test.nodes))
    if m == 0:
        pos_term = 0.0
    else:
        diff = 0
        for a, b in zip(ref.nodes[:m], test.nodes[:m]):
            linf = max(abs(x - y) for x, y in zip(a.fingerprint, b.fingerprint))
            if linf > _FP_EPS:
                diff += 1
        pos_term = diff / m
    return _clamp01(0.5 * hist_term + 0.5 * pos_term)


def _d_order(ref: InteractionGraph, test: InteractionGraph) -> float:
    n = ref.num_qubits
    if n == 0:
        return 0.0
    total = 0.0
    for q in range(n):
        a = ref.per_qubit_sequences[q]
        b = test.per_qubit_sequences[q]
        if not a and not b:
            continue
        total += 1.0 - lcs_length(a, b) / max(len(a), len(b))
    return _clamp01(total / n)


def _d_usage(ref: InteractionGraph, test: InteractionGraph) -> float:
    n = ref.num_qubits
    if n == 0:
        return 0.0
    ref_total = sum(ref.qubit_usage)
    test_total = sum(test.qubit_usage)
    ref_norm = [u / ref_total for u in ref.qubit_usage] if ref_total else [0.0] * n
    test_norm = [u / test_total for u in test.qubit_usage] if test_total else [0.0] * n
    l1 = sum(abs(a - b) for a, b in zip(ref_norm, test_norm))
    idle_violations = sum(
        1 for a, b in zip(ref.qubit_usage, test.qubit_usage) if a == 0 and b > 0
    )
    return _clamp01(0.5 * (l1 / 2.0) + 0.5 * (idle_violations / n))


def compute_igs(
    ref: InteractionGraph,
    test: InteractionGraph,
    weights=IGS_DEFAULT_WEIGHTS,
) -> IgsResult:
    _check_weights(weights, 5)
    if ref.num_qubits != test.num_qubits:
        raise IncompatibilityError(
            f"qubit counts differ: {ref.num_qubits} vs {test.num_qubits}"
        )
    d_edge = _hist_tv_or_extreme(_edge_histogram(ref), _edge_histogram(test))
    d_node = _d_node(ref, test)
    d_order = _d_order(ref, test)
    d_inter = _hist_tv_or_extreme(ref.pair_histogram, test.pair_histogram)
    d_usage = _d_usage(ref, test)
    comps = (d_edge, d_node, d_order, d_inter, d_usage)
    igs = _clamp01(1.0 - math.fsum(w * d for w, d in zip(weights, comps)))
    return IgsResult(igs, d_edge, d_node, d_order, d_inter, d_usage, tuple(weights))
