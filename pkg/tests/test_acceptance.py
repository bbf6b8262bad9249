"""Acceptance suite: one test per top-level claim, each printing a PASS/FAIL
line so the run log doubles as a checklist."""

import time

import numpy as np
import pytest

from qcintegrity.anomaly import AnomalySpec, inject
from qcintegrity.circuit import (
    Circuit,
    GateKind,
    Operation,
    StructuralProfile,
    structural_profile,
)
from qcintegrity.errors import CapacityError
from qcintegrity.graph import build_interaction_graph
from qcintegrity.harness import records_to_csv, run_benchmark, strip_timings
from qcintegrity.metrics import compute_igs, compute_sis, js_distance, kl_divergence
from qcintegrity.simulator import OutputDistribution, run_statevector, simulate_exact
from qcintegrity.stats import PairedSample, pearson, spearman

import dataclasses

from test_metrics_oracle import ORACLES, property_corpus

K = GateKind


def report(capsys, name, failures):
    status = "PASS" if not failures else "FAIL"
    with capsys.disabled():
        print(f"\n[{status}] acceptance: {name}"
              + (f" ({len(failures)} issue(s): {failures[:3]})" if failures else ""))
    assert not failures, f"{name}: {failures}"


def _random_dist(rng, width):
    n_keys = int(rng.integers(1, 2**width + 1))
    keys = rng.choice(2**width, size=n_keys, replace=False)
    raw = rng.random(n_keys) + 1e-3
    raw /= raw.sum()
    return OutputDistribution({format(int(k), f"0{width}b"): float(p)
                               for k, p in zip(keys, raw)})


def test_acceptance_jsd_formula(capsys):
    failures = []
    t0 = time.perf_counter()
    p = OutputDistribution({"0": 0.5, "1": 0.5})
    q = OutputDistribution({"0": 0.25, "1": 0.75})
    if abs(kl_divergence(p, q) - 0.2075187) > 1e-6:
        failures.append(f"kl reference value {kl_divergence(p, q)}")
    one = OutputDistribution({"0": 1.0})
    if abs(js_distance(one, p) - 0.5579230) > 1e-6:
        failures.append(f"js reference value {js_distance(one, p)}")
    rng = np.random.default_rng(2024)
    for i in range(1000):
        width = int(rng.integers(1, 5))
        a = _random_dist(rng, width)
        b = _random_dist(rng, width)
        d = js_distance(a, b)
        if abs(d - js_distance(b, a)) > 1e-12:
            failures.append(f"symmetry broken at pair {i}")
        if not -1e-12 <= d <= 1.0 + 1e-12:
            failures.append(f"out of bounds at pair {i}: {d}")
        if js_distance(a, a) > 1e-12:
            failures.append(f"identity broken at pair {i}")
        if not set(a.probs) & set(b.probs) and abs(d - 1.0) > 1e-12:
            failures.append(f"disjoint support != 1 at pair {i}")
    elapsed = time.perf_counter() - t0
    if elapsed >= 1.0:
        failures.append(f"runtime {elapsed:.2f}s >= 1s")
    report(capsys, "jsd formula checks (tol 1e-6 refs, 1e-12 properties, <1s)",
           failures)


def test_acceptance_sis_formula(capsys):
    failures = []
    p = StructuralProfile(10, 5, 3, {frozenset((0, 1)): 1.0})
    if compute_sis(p, p).sis != 1.0:
        failures.append("identity not exactly 1")
    dev = compute_sis(StructuralProfile(10, 5, 3, {}), StructuralProfile(9, 5, 3, {}))
    if abs(dev.sis - 0.975) > 1e-9:
        failures.append(f"single-component example {dev.sis}")
    rng = np.random.default_rng(8)
    for i in range(10_000):
        vals = rng.integers(0, 500, size=6)
        r = compute_sis(
            StructuralProfile(int(vals[0]), int(vals[1]), int(vals[2]),
                              {frozenset((0, 1)): 1.0} if vals[0] % 2 else {}),
            StructuralProfile(int(vals[3]), int(vals[4]), int(vals[5]),
                              {frozenset((0, 2)): 1.0} if vals[3] % 2 else {}),
        )
        if not 0.0 <= r.sis <= 1.0:
            failures.append(f"fuzz pair {i}: sis {r.sis}")
            break
    report(capsys, "sis formula checks (identity, 0.975 example, 1e4 fuzz)",
           failures)


def test_acceptance_blind_spot_mechanism(capsys, bench_run):
    records, summary, elapsed = bench_run
    failures = []
    if summary["counts"]["circuits"] < 10:
        failures.append(f"corpus too small: {summary['counts']['circuits']}")
    if any(r.num_qubits > 8 for r in records):
        failures.append("corpus circuit above 8 qubits")
    cells = [r for r in records
             if r.status == "ok" and r.kind in ("substitute", "reorder")]
    for r in cells:
        if r.kind == "substitute" and r.sis != 1.0:
            failures.append(f"substitute sis {r.sis} on {r.circuit_id}")
        if r.kind == "reorder" and r.sis < 0.95:
            failures.append(f"reorder sis {r.sis} on {r.circuit_id}")
    with_ois = [r for r in cells if r.ois is not None]
    ois_rate = sum(1 for r in with_ois if r.ois < 0.95) / len(with_ois)
    igs_rate = sum(1 for r in cells if r.igs < 0.95) / len(cells)
    if ois_rate < 0.60:
        failures.append(f"ois detection rate {ois_rate:.2%} < 60%")
    if igs_rate < 0.40:
        failures.append(f"igs detection rate {igs_rate:.2%} < 40%")
    rows = summary["blind_spot_table"]["rows"]
    for col in ("ois_pct", "igs_pct"):
        seq = [row[col] for row in rows]
        if seq != sorted(seq):
            failures.append(f"{col} not non-decreasing: {seq}")
    if elapsed >= 120:
        failures.append(f"benchmark runtime {elapsed:.1f}s >= 2min")
    report(capsys,
           f"blind-spot mechanism (ois {ois_rate:.0%} >= 60%, igs {igs_rate:.0%}"
           f" >= 40%, run {elapsed:.1f}s < 2min)", failures)


def test_acceptance_severity_monotonicity(capsys, bench_run, bench_config):
    records, _, _ = bench_run
    failures = []
    severities = bench_config.severities

    def mean_scores(metric, kind=None):
        out = []
        for s in severities:
            vals = [getattr(r, metric) for r in records
                    if r.status == "ok" and r.severity == s
                    and getattr(r, metric) is not None
                    and (kind is None or r.kind == kind)]
            out.append(sum(vals) / len(vals) if vals else None)
        return out

    for metric in ("ois", "igs"):
        means = mean_scores(metric)
        if any(a < b - 1e-12 for a, b in zip(means, means[1:])):
            failures.append(f"mean {metric} not non-increasing: {means}")
    for kind in ("del_1q", "del_2q", "insert", "trojan_not", "trojan_h",
                 "qubit_swap"):
        means = mean_scores("sis", kind)
        if any(a < b - 1e-12 for a, b in zip(means, means[1:])):
            failures.append(f"mean sis for {kind} not non-increasing: {means}")
    for kind in ("substitute", "reorder"):
        vals = [r.sis for r in records
                if r.status == "ok" and r.kind == kind and r.sis is not None]
        low = min(vals)
        if low < 0.95:
            failures.append(f"{kind} sis dropped to {low}")
    report(capsys, "severity monotonicity (mean ois/igs down, sis per kind)",
           failures)


def test_acceptance_simulator_correctness(capsys):
    failures = []
    bell = simulate_exact(Circuit("bell", 2, 0, (
        Operation(K.H, (0,)), Operation(K.CX, (0, 1)))))
    if abs(bell.probs.get("00", 0) - 0.5) > 1e-12 or \
            abs(bell.probs.get("11", 0) - 0.5) > 1e-12:
        failures.append(f"bell {bell.probs}")
    ghz = simulate_exact(Circuit("ghz", 3, 0, (
        Operation(K.H, (0,)), Operation(K.CX, (0, 1)), Operation(K.CX, (1, 2)))))
    if set(ghz.probs) != {"000", "111"} or abs(ghz.probs["000"] - 0.5) > 1e-12:
        failures.append(f"ghz {ghz.probs}")
    flip = simulate_exact(Circuit("x", 1, 0, (Operation(K.X, (0,)),)))
    if flip.probs != {"1": 1.0}:
        failures.append(f"x {flip.probs}")
    rng = np.random.default_rng(4242)
    rot = [K.RX, K.RY, K.RZ]
    fixed = [K.H, K.X, K.Y, K.Z, K.S, K.T, K.SDG, K.TDG]
    for i in range(10_000):
        ops = []
        for _ in range(int(rng.integers(3, 9))):
            r = rng.random()
            if r < 0.3:
                a, b = rng.choice(6, size=2, replace=False)
                ops.append(Operation(K.CX, (int(a), int(b))))
            elif r < 0.55:
                kind = rot[int(rng.integers(0, 3))]
                ops.append(Operation(kind, (int(rng.integers(0, 6)),),
                                     (float(rng.uniform(-7, 7)),)))
            else:
                kind = fixed[int(rng.integers(0, len(fixed)))]
                ops.append(Operation(kind, (int(rng.integers(0, 6)),)))
        # run_statevector raises if any gate drifts the norm beyond 1e-9
        state = run_statevector(Circuit(f"r{i}", 6, 0, tuple(ops)))
        if abs(float(np.vdot(state, state).real) - 1.0) > 1e-9:
            failures.append(f"norm drift on circuit {i}")
            break
    report(capsys, "simulator correctness (bell/ghz/x exact, 1e4 norm checks)",
           failures)


def test_acceptance_statistics(capsys):
    failures = []
    r, _ = pearson(PairedSample((1, 2, 3, 4, 5), (2, 1, 4, 3, 5)))
    if abs(r - 0.8) > 1e-9:
        failures.append(f"pearson {r}")
    rho, _ = spearman(PairedSample((1, 2, 3), (3, 1, 2)))
    if abs(rho + 0.5) > 1e-9:
        failures.append(f"spearman {rho}")
    perfect, _ = pearson(PairedSample((1, 2, 3), (2, 4, 6)))
    if perfect != 1.0:
        failures.append(f"perfect linear {perfect}")
    report(capsys, "statistics (pearson 0.8, spearman -0.5, r=1)", failures)


def test_acceptance_reproducibility(capsys, bench_config, bench_run):
    records, _, _ = bench_run
    baseline = strip_timings(records_to_csv(records))
    failures = []
    for workers in (1, 4):
        cfg = dataclasses.replace(bench_config, parallelism=workers)
        again, _, _ = run_benchmark(cfg)
        if strip_timings(records_to_csv(again)) != baseline:
            failures.append(f"csv bytes differ at {workers} workers")
    report(capsys, "reproducibility (timing-stripped csv, workers 1 and 4)",
           failures)


def test_acceptance_igs_oracle_equivalence(capsys):
    pool = property_corpus()
    failures = []
    for ref in pool:
        if len(ref.ops) > 6:
            continue
        ref_graph = build_interaction_graph(ref)
        for test in pool:
            if len(test.ops) > 6:
                continue
            result = compute_igs(ref_graph, build_interaction_graph(test))
            for name, oracle in ORACLES.items():
                got = getattr(result, name)
                want = oracle(ref, test)
                if abs(got - want) > 1e-12:
                    failures.append(
                        f"{name} {ref.name} vs {test.name}: {got} != {want}")
    report(capsys, "igs oracle equivalence (5 components, <=6-op pairs, 1e-12)",
           failures)


def _synthetic(num_qubits, num_gates, seed=0):
    rng = np.random.default_rng(seed)
    one_q = [K.H, K.T, K.S, K.X, K.RZ]
    ops = []
    for _ in range(num_gates):
        if rng.random() < 0.35:
            a, b = rng.choice(num_qubits, size=2, replace=False)
            ops.append(Operation(K.CX, (int(a), int(b))))
        else:
            kind = one_q[int(rng.integers(0, len(one_q)))]
            params = (float(rng.uniform(0, 3)),) if kind is K.RZ else ()
            ops.append(Operation(kind, (int(rng.integers(0, num_qubits)),), params))
    return Circuit(f"synthetic_{num_qubits}q", num_qubits, 0, tuple(ops))


def test_acceptance_performance_envelope(capsys, bench_run):
    failures = []
    big = _synthetic(14, 2000)
    mutated, _ = inject(big, AnomalySpec("substitute", "severity", 0.3))
    ref_graph = build_interaction_graph(big)
    t0 = time.perf_counter()
    compute_igs(ref_graph, build_interaction_graph(mutated))
    t_igs = time.perf_counter() - t0
    if t_igs >= 1.0:
        failures.append(f"igs on 14q/2000 gates took {t_igs:.2f}s")
    t0 = time.perf_counter()
    p = simulate_exact(big)
    q = simulate_exact(mutated)
    js_distance(p, q)
    t_ois = time.perf_counter() - t0
    if t_ois <= t_igs:
        failures.append(f"ois ({t_ois:.3f}s) not slower than igs ({t_igs:.3f}s)")
    records, _, _ = bench_run
    for nq in sorted({r.num_qubits for r in records if r.num_qubits >= 8}):
        sub = [r for r in records if r.num_qubits == nq]
        igs_ts = [r.t_igs_ms for r in sub if r.t_igs_ms is not None]
        ois_ts = [r.t_ois_ms for r in sub if r.t_ois_ms is not None]
        if igs_ts and ois_ts and not (
                sum(igs_ts) / len(igs_ts) < sum(ois_ts) / len(ois_ts)):
            failures.append(f"mean t_igs >= mean t_ois at {nq} qubits")
    try:
        simulate_exact(_synthetic(20, 50, seed=1))
        failures.append("20-qubit simulation was not rejected")
    except CapacityError:
        pass
    report(capsys,
           f"performance envelope (igs {t_igs * 1e3:.0f}ms < 1s, "
           f"ois {t_ois * 1e3:.0f}ms slower, 20q rejected)", failures)
