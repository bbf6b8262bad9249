import pathlib
import time

import pytest

from qcintegrity.circuit import Circuit, GateKind, Operation
from qcintegrity.harness import BenchConfig, run_benchmark

CORPUS_DIR = pathlib.Path(__file__).resolve().parent.parent / "src" / "qcintegrity" / "corpus"

K = GateKind


@pytest.fixture
def bell():
    return Circuit("bell", 2, 0, (
        Operation(K.H, (0,)),
        Operation(K.CX, (0, 1)),
    ))


@pytest.fixture
def ghz3():
    return Circuit("ghz3", 3, 0, (
        Operation(K.H, (0,)),
        Operation(K.CX, (0, 1)),
        Operation(K.CX, (1, 2)),
    ))


@pytest.fixture(scope="session")
def corpus_dir():
    assert CORPUS_DIR.is_dir()
    return CORPUS_DIR


@pytest.fixture(scope="session")
def bench_config():
    return BenchConfig(corpus_dir=str(CORPUS_DIR))


@pytest.fixture(scope="session")
def bench_run(bench_config):
    """One full benchmark run over the bundled corpus, shared by the suite."""
    t0 = time.perf_counter()
    records, summary, warnings = run_benchmark(bench_config)
    elapsed = time.perf_counter() - t0
    assert not warnings
    return records, summary, elapsed
