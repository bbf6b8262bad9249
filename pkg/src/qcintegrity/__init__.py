"""Quantum-circuit integrity toolkit.

Three complementary metrics compare a test circuit against a reference:
SIS (global structure), OIS (output-distribution behavior), and IGS
(interaction-graph semantics), plus a controlled anomaly-injection benchmark.
"""

from .circuit import (
    Circuit,
    GateKind,
    Operation,
    StructuralProfile,
    gate_unitary,
    structural_profile,
)
from .qasm import ParseDiagnostic, emit_qasm, parse_qasm
from .simulator import OutputDistribution, simulate_exact, simulate_sampled
from .graph import (
    InteractionGraph,
    InteractionNode,
    build_interaction_graph,
    to_dot,
    unitary_fingerprint,
)
from .metrics import (
    IgsResult,
    OisResult,
    SisResult,
    compute_igs,
    compute_ois,
    compute_sis,
    js_distance,
    kl_divergence,
)
from .anomaly import (
    ANOMALY_KINDS,
    AnomalyLog,
    AnomalySpec,
    eligible_sites,
    inject,
)
from .stats import PairedSample, pearson, spearman, summarize
from .harness import BenchConfig, BenchRecord, run_benchmark

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "GateKind",
    "Operation",
    "StructuralProfile",
    "gate_unitary",
    "structural_profile",
    "ParseDiagnostic",
    "parse_qasm",
    "emit_qasm",
    "OutputDistribution",
    "simulate_exact",
    "simulate_sampled",
    "InteractionGraph",
    "InteractionNode",
    "build_interaction_graph",
    "unitary_fingerprint",
    "to_dot",
    "SisResult",
    "OisResult",
    "IgsResult",
    "compute_sis",
    "compute_ois",
    "compute_igs",
    "kl_divergence",
    "js_distance",
    "ANOMALY_KINDS",
    "AnomalySpec",
    "AnomalyLog",
    "inject",
    "eligible_sites",
    "PairedSample",
    "pearson",
    "spearman",
    "summarize",
    "BenchConfig",
    "BenchRecord",
    "run_benchmark",
]
