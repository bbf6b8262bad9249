import json

import pytest

from qcintegrity.cli import main

BELL = 'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\nh q[0];\ncx q[0],q[1];\n'


@pytest.fixture
def bell_path(tmp_path):
    path = tmp_path / "bell.qasm"
    path.write_text(BELL)
    return str(path)


def test_validate_self_identity(bell_path, capsys):
    assert main(["validate", bell_path, bell_path]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["sis"]["sis"] == 1.0
    assert out["igs"]["igs"] == 1.0
    assert out["ois"]["ois"] == 1.0


def test_validate_no_sim(bell_path, capsys):
    assert main(["validate", bell_path, bell_path, "--no-sim"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["ois"] is None
    assert out["timings_ms"]["ois"] is None


def test_validate_blind_spot_pair(bell_path, tmp_path, capsys):
    sub = tmp_path / "sub.qasm"
    sub.write_text(BELL.replace("h q[0];", "z q[0];"))
    assert main(["validate", bell_path, str(sub)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["sis"]["sis"] == 1.0
    assert out["ois"]["ois"] < 1.0
    assert out["igs"]["igs"] < 1.0


def test_validate_parse_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.qasm"
    bad.write_text("qreg q[1]; frobnicate q[0];")
    with pytest.raises(SystemExit) as exc:
        main(["validate", str(bad), str(bad)])
    assert exc.value.code == 2
    assert "bad.qasm" in capsys.readouterr().err


def test_validate_cap_exit_3(tmp_path, capsys):
    big = tmp_path / "big.qasm"
    big.write_text("qreg q[20];\nh q[0];\n")
    assert main(["validate", str(big), str(big)]) == 3
    err = capsys.readouterr().err
    assert "14" in err
    # with --no-sim the same pair validates fine
    assert main(["validate", str(big), str(big), "--no-sim"]) == 0


def test_inject_substitute_fixed(tmp_path, capsys):
    src = tmp_path / "x.qasm"
    src.write_text("OPENQASM 2.0;\nqreg q[1];\nx q[0];\n")
    assert main(["inject", str(src), "--kind", "substitute"]) == 0
    captured = capsys.readouterr()
    assert "y q[0];" in captured.out
    log = json.loads(captured.err)
    assert log["applied_count"] == 1


def test_inject_deterministic(bell_path, capsys):
    main(["inject", bell_path, "--kind", "insert", "--seed", "7"])
    first = capsys.readouterr().out
    main(["inject", bell_path, "--kind", "insert", "--seed", "7"])
    assert capsys.readouterr().out == first


def test_inject_ineligible_exit_4(tmp_path, capsys):
    src = tmp_path / "h.qasm"
    src.write_text("qreg q[1];\nh q[0];\n")
    assert main(["inject", str(src), "--kind", "del_2q"]) == 4
    assert "del_2q" in capsys.readouterr().err


def test_inject_output_file(bell_path, tmp_path, capsys):
    out = tmp_path / "mut.qasm"
    assert main(["inject", bell_path, "--kind", "substitute",
                 "-o", str(out)]) == 0
    assert out.exists()
    capsys.readouterr()


def test_bench_empty_corpus_exit_5(tmp_path, capsys):
    empty = tmp_path / "corpus"
    empty.mkdir()
    assert main(["bench", "--corpus", str(empty), "-o", str(tmp_path / "out")]) == 5
    capsys.readouterr()


def test_bench_and_report_end_to_end(bell_path, tmp_path, capsys, monkeypatch):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "bell.qasm").write_text(BELL)
    outdir = tmp_path / "out"
    assert main(["bench", "--corpus", str(corpus), "-o", str(outdir)]) == 0
    capsys.readouterr()
    csv_path = outdir / "records.csv"
    summary_path = outdir / "summary.json"
    assert csv_path.exists() and summary_path.exists()
    summary = json.loads(summary_path.read_text())
    assert summary["counts"]["circuits"] == 1
    assert summary["counts"]["records"] == 32

    report_path = tmp_path / "report.json"
    assert main(["report", "--csv", str(csv_path), "-o", str(report_path)]) == 0
    capsys.readouterr()
    report = json.loads(report_path.read_text())
    assert set(report) == {"blind_spot_table", "correlations", "runtime_table"}
    # the report derives the same blind-spot table from the CSV alone
    assert report["blind_spot_table"]["totals"]["blind_cases"] == \
        summary["blind_spot_table"]["totals"]["blind_cases"]


def test_bench_config_file_and_env_seed(bell_path, tmp_path, capsys, monkeypatch):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "bell.qasm").write_text(BELL)
    cfg = tmp_path / "bench.cfg"
    cfg.write_text(
        "# comment line\n"
        "shots = 256\n"
        "severities = 0.2,0.5\n"
        "kinds = substitute,insert\n"
    )
    outdir = tmp_path / "out"
    monkeypatch.setenv("QCI_SEED", "7")
    assert main(["bench", "--corpus", str(corpus), "-o", str(outdir),
                 "--config", str(cfg)]) == 0
    capsys.readouterr()
    summary = json.loads((outdir / "summary.json").read_text())
    assert summary["config"]["shots"] == 256
    assert summary["config"]["master_seed"] == 7
    assert summary["config"]["severities"] == [0.2, 0.5]
    assert summary["counts"]["records"] == 2 * (1 + 2)


def test_bench_kind_flag_overrides_config(bell_path, tmp_path, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "bell.qasm").write_text(BELL)
    outdir = tmp_path / "out"
    assert main(["bench", "--corpus", str(corpus), "-o", str(outdir),
                 "--kinds", "substitute", "--modes", "fixed"]) == 0
    capsys.readouterr()
    summary = json.loads((outdir / "summary.json").read_text())
    assert summary["counts"]["records"] == 1
