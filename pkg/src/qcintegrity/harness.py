"""Benchmark harness: corpus filtering, anomaly grid execution, metric
computation, blind-spot and correlation analysis, CSV/JSON reporting.

Output bytes (modulo wall-clock timing columns) are a pure function of the
corpus bytes and the configuration; records are emitted in canonical sort
order so the degree of parallelism never changes the report.
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict
from pathlib import Path

from .anomaly import ANOMALY_KINDS, AnomalySpec, derive_seed, eligible_sites, inject
from .circuit import Circuit, structural_profile
from .errors import (
    EmptyInputError,
    IneligibilityError,
    InternalConsistencyError,
    QasmParseError,
)
from .graph import build_interaction_graph, cached_interaction_graph
from .metrics import compute_igs, compute_ois, compute_sis
from .qasm import parse_qasm
from .simulator import sample_distribution, simulate_exact
from .stats import PairedSample, pearson, spearman, summarize
from .errors import DegenerateSampleError


@dataclass
class BenchConfig:
    corpus_dir: str = ""
    max_qubits: int = 40
    max_gates: int = 2000
    ois_qubit_cap: int = 14
    shots: int = 1024
    master_seed: int = 42
    severities: tuple[float, ...] = (0.1, 0.3, 0.6)
    modes: tuple[str, ...] = ("fixed", "severity")
    kinds: tuple[str, ...] = ANOMALY_KINDS
    sis_blind_threshold: float = 0.95
    detection_threshold: float = 0.95
    parallelism: int = 1
    exact_reference: bool = False
    small_max_qubits: int = 10
    medium_max_qubits: int = 27

    def __post_init__(self):
        if not 0.0 < self.sis_blind_threshold <= 1.0:
            raise ValueError("sis_blind_threshold must be in (0,1]")
        if not 0.0 < self.detection_threshold <= 1.0:
            raise ValueError("detection_threshold must be in (0,1]")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if any(not 0.0 < s <= 1.0 for s in self.severities):
            raise ValueError("severities must lie in (0,1]")

    def size_class(self, num_qubits: int) -> str:
        if num_qubits <= self.small_max_qubits:
            return "small"
        if num_qubits <= self.medium_max_qubits:
            return "medium"
        return "large"


# CSV column order; this is the on-disk schema.
CSV_COLUMNS = [
    "circuit_id",
    "size_class",
    "num_qubits",
    "gate_count",
    "kind",
    "mode",
    "severity",
    "status",
    "sis",
    "delta_gate",
    "delta_depth",
    "delta_2q",
    "delta_topo",
    "igs",
    "d_edge",
    "d_node",
    "d_order",
    "d_inter",
    "d_usage",
    "ois",
    "jsd",
    "detected_by_ois",
    "detected_by_igs",
    "blind_spot",
    "t_sis_ms",
    "t_igs_ms",
    "t_ois_ms",
    "applied_count",
    "seed_stream_id",
]

TIMING_COLUMNS = ("t_sis_ms", "t_igs_ms", "t_ois_ms")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


@dataclass
class BenchRecord:
    circuit_id: str
    size_class: str
    num_qubits: int
    gate_count: int
    kind: str
    mode: str
    severity: float | None
    status: str
    sis: float | None = None
    delta_gate: float | None = None
    delta_depth: float | None = None
    delta_2q: float | None = None
    delta_topo: float | None = None
    igs: float | None = None
    d_edge: float | None = None
    d_node: float | None = None
    d_order: float | None = None
    d_inter: float | None = None
    d_usage: float | None = None
    ois: float | None = None
    jsd: float | None = None
    detected_by_ois: bool | str | None = None
    detected_by_igs: bool | None = None
    blind_spot: bool | None = None
    t_sis_ms: float | None = None
    t_igs_ms: float | None = None
    t_ois_ms: float | None = None
    applied_count: int = 0
    seed_stream_id: str = ""

    def to_row(self) -> list[str]:
        return [_fmt(getattr(self, col)) for col in CSV_COLUMNS]


def load_corpus(corpus_dir, config: BenchConfig):
    """Parse and filter the corpus; returns (circuits, warnings)."""
    circuits = []
    warnings = []
    for path in sorted(Path(corpus_dir).glob("*.qasm")):
        try:
            circ = parse_qasm(path.read_text(), name=path.stem)
        except QasmParseError as exc:
            warnings.append(f"{path.name}: {exc}")
            continue
        # the corpus gate filter counts every op, including measures/barriers
        if circ.num_qubits > config.max_qubits or len(circ.ops) > config.max_gates:
            warnings.append(f"{path.name}: filtered out (size)")
            continue
        circuits.append(circ)
    return circuits, warnings


def evaluate_pair(ref: Circuit, test: Circuit, config: BenchConfig | None = None,
                  with_ois: bool = True, sampled: bool = False,
                  seed_stream: str = ""):
    """Compute all three metrics for one (ref, test) pair, with timings.

    Returns a dict with sis/igs/ois result objects (ois None when skipped)
    and t_*_ms wall-clock timings.
    """
    config = config or BenchConfig()
    ref_profile = structural_profile(ref)
    ref_graph = cached_interaction_graph(ref)

    t0 = time.perf_counter()
    sis = compute_sis(ref_profile, structural_profile(test))
    t_sis = (time.perf_counter() - t0) * 1e3

    t0 = time.perf_counter()
    igs = compute_igs(ref_graph, build_interaction_graph(test))
    t_igs = (time.perf_counter() - t0) * 1e3

    ois = None
    t_ois = None
    if with_ois:
        t0 = time.perf_counter()
        if sampled:
            ref_exact = simulate_exact(ref, config.ois_qubit_cap)
            p_ref = sample_distribution(
                ref_exact, config.shots, derive_seed(seed_stream, "ref")
            ) if not config.exact_reference else ref_exact
            q_test = sample_distribution(
                simulate_exact(test, config.ois_qubit_cap),
                config.shots,
                derive_seed(seed_stream, "test"),
            )
        else:
            p_ref = simulate_exact(ref, config.ois_qubit_cap)
            q_test = simulate_exact(test, config.ois_qubit_cap)
        ois = compute_ois(p_ref, q_test)
        t_ois = (time.perf_counter() - t0) * 1e3

    return {"sis": sis, "igs": igs, "ois": ois,
            "t_sis_ms": t_sis, "t_igs_ms": t_igs, "t_ois_ms": t_ois}


def _run_cell(ref: Circuit, ref_exact, kind: str, mode: str,
              severity: float | None, config: BenchConfig) -> BenchRecord:
    severity_label = severity if mode == "severity" else None
    stream_id = (
        f"{config.master_seed}/{ref.name}/{kind}/{mode}"
        + (f"/{severity:g}" if mode == "severity" else "")
    )
    record = BenchRecord(
        circuit_id=ref.name,
        size_class=config.size_class(ref.num_qubits),
        num_qubits=ref.num_qubits,
        gate_count=len([op for op in ref.ops if op.is_unitary]),
        kind=kind,
        mode=mode,
        severity=severity_label,
        status="ok",
        seed_stream_id=stream_id,
    )
    spec = AnomalySpec(kind, mode, severity if mode == "severity" else None,
                       seed=derive_seed(stream_id))
    try:
        mutated, log = inject(ref, spec)
    except IneligibilityError:
        record.status = "skipped:ineligible"
        return record
    record.applied_count = log.applied_count

    ref_profile = structural_profile(ref)
    ref_graph = cached_interaction_graph(ref)

    t0 = time.perf_counter()
    sis = compute_sis(ref_profile, structural_profile(mutated))
    record.t_sis_ms = (time.perf_counter() - t0) * 1e3
    t0 = time.perf_counter()
    igs = compute_igs(ref_graph, build_interaction_graph(mutated))
    record.t_igs_ms = (time.perf_counter() - t0) * 1e3

    record.sis = sis.sis
    record.delta_gate = sis.delta_gate
    record.delta_depth = sis.delta_depth
    record.delta_2q = sis.delta_2q
    record.delta_topo = sis.delta_topo
    record.igs = igs.igs
    record.d_edge = igs.d_edge
    record.d_node = igs.d_node
    record.d_order = igs.d_order
    record.d_inter = igs.d_inter
    record.d_usage = igs.d_usage
    record.detected_by_igs = igs.igs < config.detection_threshold
    record.blind_spot = sis.sis >= config.sis_blind_threshold

    if ref.num_qubits > config.ois_qubit_cap or ref_exact is None:
        record.status = "skipped:qubit_cap"
        record.detected_by_ois = "n/a"
        return record
    try:
        t0 = time.perf_counter()
        if config.exact_reference:
            p_ref = ref_exact
        else:
            p_ref = sample_distribution(
                ref_exact, config.shots, derive_seed(stream_id, "ref")
            )
        q_test = sample_distribution(
            simulate_exact(mutated, config.ois_qubit_cap),
            config.shots,
            derive_seed(stream_id, "test"),
        )
        ois = compute_ois(p_ref, q_test)
        record.t_ois_ms = (time.perf_counter() - t0) * 1e3
    except InternalConsistencyError:
        # e.g. an insertion landed after a terminal measurement
        record.status = "skipped:sim_error"
        record.detected_by_ois = "n/a"
        return record
    record.ois = ois.ois
    record.jsd = ois.jsd
    record.detected_by_ois = ois.ois < config.detection_threshold
    return record


def run_benchmark(config: BenchConfig):
    """Execute the full grid; returns (records, summary, warnings)."""
    circuits, warnings = load_corpus(config.corpus_dir, config)
    if not circuits:
        raise EmptyInputError("no parseable circuit passes the corpus filter")

    ref_exact_cache = {}
    for circ in circuits:
        if circ.num_qubits <= config.ois_qubit_cap:
            try:
                ref_exact_cache[circ.name] = simulate_exact(circ, config.ois_qubit_cap)
            except InternalConsistencyError as exc:
                warnings.append(f"{circ.name}: reference simulation failed: {exc}")
                ref_exact_cache[circ.name] = None
        else:
            ref_exact_cache[circ.name] = None

    cells = []
    for circ in circuits:
        for kind in config.kinds:
            for mode in config.modes:
                if mode == "fixed":
                    cells.append((circ, kind, "fixed", None))
                else:
                    for s in config.severities:
                        cells.append((circ, kind, "severity", s))

    def work(cell):
        circ, kind, mode, severity = cell
        return _run_cell(circ, ref_exact_cache[circ.name], kind, mode, severity, config)

    if config.parallelism > 1:
        with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
            records = list(pool.map(work, cells))
    else:
        records = [work(cell) for cell in cells]

    records.sort(key=lambda r: (r.circuit_id, r.kind, r.mode, r.severity or 0.0))
    summary = build_summary(records, config, num_circuits=len(circuits))
    return records, summary, warnings


def write_csv(records, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for record in records:
        writer.writerow(record.to_row())


def records_to_csv(records) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def strip_timings(csv_text: str) -> str:
    """Projection of a records CSV without the host-dependent timing columns."""
    rows = list(csv.reader(io.StringIO(csv_text)))
    header = rows[0]
    keep = [i for i, col in enumerate(header) if col not in TIMING_COLUMNS]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow([row[i] for i in keep])
    return buf.getvalue()


def read_csv(path_or_stream):
    """Read a records CSV back into BenchRecord objects."""
    if hasattr(path_or_stream, "read"):
        rows = list(csv.DictReader(path_or_stream))
    else:
        with open(path_or_stream, newline="") as fh:
            rows = list(csv.DictReader(fh))
    records = []
    for row in rows:
        kwargs = {}
        for col in CSV_COLUMNS:
            raw = row.get(col, "")
            if raw == "":
                kwargs[col] = None
            elif col in ("num_qubits", "gate_count", "applied_count"):
                kwargs[col] = int(raw)
            elif col in ("circuit_id", "size_class", "kind", "mode", "status",
                         "seed_stream_id"):
                kwargs[col] = raw
            elif col in ("detected_by_ois",):
                kwargs[col] = raw if raw == "n/a" else raw == "true"
            elif col in ("detected_by_igs", "blind_spot"):
                kwargs[col] = raw == "true"
            else:
                kwargs[col] = float(raw)
        if kwargs["applied_count"] is None:
            kwargs["applied_count"] = 0
        if kwargs["seed_stream_id"] is None:
            kwargs["seed_stream_id"] = ""
        records.append(BenchRecord(**kwargs))
    return records


# ---------------------------------------------------------------------------
# Analyses
# ---------------------------------------------------------------------------


def blind_spot_analysis(records, sis_threshold: float = 0.95,
                        detection_threshold: float = 0.95) -> dict:
    """Table of OIS/IGS detection counts among structurally blind cases.

    Restricted to severity-mode records where OIS is available, mirroring the
    severity-wise anomaly setting.
    """
    blind = [
        r for r in records
        if r.status == "ok" and r.mode == "severity"
        and r.sis is not None and r.sis >= sis_threshold
        and r.ois is not None
    ]
    severities = sorted({r.severity for r in blind})
    rows = []
    for s in severities:
        group = [r for r in blind if r.severity == s]
        ois_det = sum(1 for r in group if r.ois < detection_threshold)
        igs_det = sum(1 for r in group if r.igs < detection_threshold)
        rows.append({
            "severity": s,
            "blind_cases": len(group),
            "ois_detected": ois_det,
            "igs_detected": igs_det,
            "ois_pct": 100.0 * ois_det / len(group) if group else 0.0,
            "igs_pct": 100.0 * igs_det / len(group) if group else 0.0,
        })
    total_ois = sum(r["ois_detected"] for r in rows)
    total_igs = sum(r["igs_detected"] for r in rows)
    total_cases = sum(r["blind_cases"] for r in rows)
    totals = {
        "severity": "total",
        "blind_cases": total_cases,
        "ois_detected": total_ois,
        "igs_detected": total_igs,
        "ois_pct": 100.0 * total_ois / total_cases if total_cases else 0.0,
        "igs_pct": 100.0 * total_igs / total_cases if total_cases else 0.0,
    }
    return {"rows": rows, "totals": totals}


def _correlation_entry(records):
    pairs = [(r.igs, r.ois) for r in records
             if r.status == "ok" and r.igs is not None and r.ois is not None]
    if len(pairs) < 3:
        return {"n": len(pairs), "pearson_r": None, "pearson_p": None,
                "spearman_rho": None, "spearman_p": None}
    sample = PairedSample(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))
    try:
        r, rp = pearson(sample)
        rho, sp_ = spearman(sample)
    except DegenerateSampleError:
        return {"n": len(pairs), "pearson_r": None, "pearson_p": None,
                "spearman_rho": None, "spearman_p": None}
    return {"n": len(pairs), "pearson_r": r, "pearson_p": rp,
            "spearman_rho": rho, "spearman_p": sp_}


def correlation_analysis(records, severities=None) -> dict:
    severities = severities or sorted(
        {r.severity for r in records if r.severity is not None}
    )
    out = {"overall": _correlation_entry([r for r in records if r.mode == "severity"])}
    out["per_severity"] = {
        f"{s:g}": _correlation_entry([r for r in records if r.severity == s])
        for s in severities
    }
    return out


def runtime_study(records) -> list[dict]:
    """Mean/stddev of metric timings grouped by qubit count."""
    groups = sorted({r.num_qubits for r in records})
    rows = []
    for nq in groups:
        sub = [r for r in records if r.num_qubits == nq]
        igs_ts = [r.t_igs_ms for r in sub if r.t_igs_ms is not None]
        ois_ts = [r.t_ois_ms for r in sub if r.t_ois_ms is not None]
        row = {"num_qubits": nq, "n_igs": len(igs_ts), "n_ois": len(ois_ts)}
        for label, ts in (("t_igs_ms", igs_ts), ("t_ois_ms", ois_ts)):
            if ts:
                s = summarize(ts)
                row[f"{label}_mean"] = s["mean"]
                row[f"{label}_stddev"] = s["stddev"]
            else:
                row[f"{label}_mean"] = None
                row[f"{label}_stddev"] = None
        rows.append(row)
    return rows


def _score_summaries(records):
    out = {}
    for name in ("sis", "igs", "ois"):
        vals = [getattr(r, name) for r in records
                if r.status == "ok" and getattr(r, name) is not None]
        out[name] = summarize(vals) if vals else None
    return out


def build_summary(records, config: BenchConfig, num_circuits: int) -> dict:
    ok = [r for r in records if r.status == "ok"]
    counts = {
        "circuits": num_circuits,
        "records": len(records),
        "ok": len(ok),
        "skipped_ineligible": sum(1 for r in records if r.status == "skipped:ineligible"),
        "skipped_qubit_cap": sum(1 for r in records if r.status == "skipped:qubit_cap"),
        "skipped_sim_error": sum(1 for r in records if r.status == "skipped:sim_error"),
    }
    per_kind = {
        kind: _score_summaries([r for r in records if r.kind == kind])
        for kind in config.kinds
    }
    per_severity = {
        f"{s:g}": _score_summaries([r for r in records if r.severity == s])
        for s in config.severities
    }
    cfg = asdict(config)
    cfg["severities"] = list(config.severities)
    cfg["modes"] = list(config.modes)
    cfg["kinds"] = list(config.kinds)
    return {
        "config": cfg,
        "counts": counts,
        "per_kind": per_kind,
        "per_severity": per_severity,
        "blind_spot_table": blind_spot_analysis(
            records, config.sis_blind_threshold, config.detection_threshold
        ),
        "correlations": correlation_analysis(records, config.severities),
        "runtime_table": runtime_study(records),
    }


def summary_to_json(summary: dict) -> str:
    return json.dumps(summary, indent=2, allow_nan=False) + "\n"
