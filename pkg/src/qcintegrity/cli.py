"""Command-line interface: validate, inject, bench, report."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import fields
from pathlib import Path

from .anomaly import ANOMALY_KINDS, AnomalySpec, derive_seed, inject
from .circuit import structural_profile
from .errors import (
    CapacityError,
    EmptyInputError,
    IneligibilityError,
    QasmParseError,
)
from .harness import (
    BenchConfig,
    blind_spot_analysis,
    correlation_analysis,
    evaluate_pair,
    read_csv,
    records_to_csv,
    run_benchmark,
    runtime_study,
    summary_to_json,
)
from .qasm import emit_qasm, parse_qasm

EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_INELIGIBLE = 4
EXIT_EMPTY_CORPUS = 5


def _load_circuit(path: str):
    try:
        return parse_qasm(Path(path).read_text(), name=Path(path).stem)
    except QasmParseError as exc:
        for d in exc.diagnostics:
            print(f"{path}:{d.line}:{d.column}: {d.severity}: {d.message}",
                  file=sys.stderr)
        sys.exit(EXIT_PARSE)


def _result_dict(result):
    out = {}
    sis = result["sis"]
    out["sis"] = {
        "sis": sis.sis,
        "delta_gate": sis.delta_gate,
        "delta_depth": sis.delta_depth,
        "delta_2q": sis.delta_2q,
        "delta_topo": sis.delta_topo,
        "weights": list(sis.weights),
    }
    igs = result["igs"]
    out["igs"] = {
        "igs": igs.igs,
        "d_edge": igs.d_edge,
        "d_node": igs.d_node,
        "d_order": igs.d_order,
        "d_inter": igs.d_inter,
        "d_usage": igs.d_usage,
        "weights": list(igs.weights),
    }
    ois = result["ois"]
    out["ois"] = (
        None if ois is None
        else {"ois": ois.ois, "jsd": ois.jsd,
              "support_union_size": ois.support_union_size}
    )
    out["timings_ms"] = {
        "sis": result["t_sis_ms"],
        "igs": result["t_igs_ms"],
        "ois": result["t_ois_ms"],
    }
    return out


def cmd_validate(args) -> int:
    ref = _load_circuit(args.ref)
    test = _load_circuit(args.test)
    config = BenchConfig(ois_qubit_cap=args.ois_qubit_cap, shots=args.shots,
                         master_seed=args.seed)
    try:
        result = evaluate_pair(
            ref, test, config,
            with_ois=not args.no_sim,
            sampled=args.sampled,
            seed_stream=f"{args.seed}/validate",
        )
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    print(json.dumps(_result_dict(result), indent=2))
    return 0


def cmd_inject(args) -> int:
    circ = _load_circuit(args.input)
    mode = "severity" if args.severity is not None else "fixed"
    spec = AnomalySpec(args.kind, mode, args.severity, seed=args.seed)
    try:
        mutated, log = inject(circ, spec)
    except IneligibilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INELIGIBLE
    text = emit_qasm(mutated)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    print(json.dumps({
        "kind": args.kind,
        "mode": mode,
        "severity": args.severity,
        "seed": args.seed,
        "requested_count": log.requested_count,
        "applied_count": log.applied_count,
        "applied": [{"op_index": i, "description": d} for i, d in log.applied],
    }), file=sys.stderr)
    return 0


def _parse_config_file(path: str) -> dict:
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line: {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = value
    return out


def _build_bench_config(args) -> BenchConfig:
    values: dict = {}
    if args.config:
        file_values = _parse_config_file(args.config)
        field_types = {f.name: f for f in fields(BenchConfig)}
        for key, raw in file_values.items():
            if key not in field_types:
                raise ValueError(f"unknown config key '{key}'")
            if key in ("severities",):
                values[key] = tuple(float(v) for v in raw.split(","))
            elif key in ("modes", "kinds"):
                values[key] = tuple(v.strip() for v in raw.split(","))
            elif key in ("sis_blind_threshold", "detection_threshold"):
                values[key] = float(raw)
            elif key in ("corpus_dir",):
                values[key] = raw
            elif key in ("exact_reference",):
                values[key] = raw.lower() in ("1", "true", "yes")
            else:
                values[key] = int(raw)
    for name in ("corpus_dir", "max_qubits", "max_gates", "ois_qubit_cap",
                 "shots", "parallelism"):
        arg = getattr(args, name, None)
        if arg is not None:
            values[name] = arg
    if args.severities is not None:
        values["severities"] = tuple(float(v) for v in args.severities.split(","))
    if args.modes is not None:
        values["modes"] = tuple(v.strip() for v in args.modes.split(","))
    if args.kinds is not None:
        values["kinds"] = tuple(v.strip() for v in args.kinds.split(","))
    if args.exact_reference:
        values["exact_reference"] = True
    if args.seed is not None:
        values["master_seed"] = args.seed
    if "QCI_SEED" in os.environ:
        values["master_seed"] = int(os.environ["QCI_SEED"])
    return BenchConfig(**values)


def cmd_bench(args) -> int:
    config = _build_bench_config(args)
    try:
        records, summary, warnings = run_benchmark(config)
    except EmptyInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY_CORPUS
    for warning in warnings:
        print(f"warning: {warning}", file=sys.stderr)
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "records.csv").write_text(records_to_csv(records))
    (outdir / "summary.json").write_text(summary_to_json(summary))
    print(f"wrote {outdir / 'records.csv'} ({len(records)} records)")
    print(f"wrote {outdir / 'summary.json'}")
    return 0


def cmd_report(args) -> int:
    records = read_csv(args.csv)
    report = {
        "blind_spot_table": blind_spot_analysis(
            records, args.sis_blind_threshold, args.detection_threshold
        ),
        "correlations": correlation_analysis(records),
        "runtime_table": runtime_study(records),
    }
    text = json.dumps(report, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qci",
        description="Quantum-circuit integrity metrics and anomaly benchmark",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="compare two QASM files")
    p.add_argument("ref")
    p.add_argument("test")
    p.add_argument("--no-sim", action="store_true",
                   help="skip OIS (pre-execution validation only)")
    p.add_argument("--sampled", action="store_true",
                   help="shot-sampled OIS instead of exact")
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--ois-qubit-cap", type=int, default=14)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("inject", help="inject one anomaly into a QASM file")
    p.add_argument("input")
    p.add_argument("--kind", required=True, choices=ANOMALY_KINDS)
    p.add_argument("--severity", type=float, default=None,
                   help="severity factor in (0,1]; omit for fixed mode")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_inject)

    p = sub.add_parser("bench", help="run the anomaly benchmark grid")
    p.add_argument("--corpus", dest="corpus_dir", required=True)
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument("--config", default=None, help="key = value config file")
    p.add_argument("--max-qubits", dest="max_qubits", type=int, default=None)
    p.add_argument("--max-gates", dest="max_gates", type=int, default=None)
    p.add_argument("--ois-qubit-cap", dest="ois_qubit_cap", type=int, default=None)
    p.add_argument("--shots", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--severities", default=None, help="comma-separated list")
    p.add_argument("--modes", default=None, help="fixed,severity")
    p.add_argument("--kinds", default=None, help="comma-separated anomaly kinds")
    p.add_argument("--parallelism", type=int, default=None)
    p.add_argument("--exact-reference", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="re-derive analysis tables from a CSV")
    p.add_argument("--csv", required=True)
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--sis-blind-threshold", type=float, default=0.95)
    p.add_argument("--detection-threshold", type=float, default=0.95)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
