import pathlib
import subprocess
import sys

import pytest

CORPUS = (
    pathlib.Path(__file__).resolve().parents[2]
    / "src" / "qcintegrity" / "corpus"
)


@pytest.fixture(scope="session")
def bench_outputs(tmp_path_factory):
    """records.csv + summary.json produced by the benchmark CLI."""
    outdir = tmp_path_factory.mktemp("bench")
    subprocess.run(
        [sys.executable, "-m", "qcintegrity.cli", "bench",
         "--corpus", str(CORPUS), "-o", str(outdir)],
        check=True, capture_output=True, text=True,
    )
    return outdir / "records.csv", outdir / "summary.json"
