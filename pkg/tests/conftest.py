import pytest

from seqlid.harness import SplitSpec, run_experiment
from seqlid.model import train
from seqlid.synthetic import generate_synthetic_corpora

DESK_THRESHOLDS = (0.0, 5.0, 10.0, 14.0, 22.0)
DESK_SEED = 0


@pytest.fixture
def toy_corpora():
    return {
        "L1": ["a"] * 1000 + ["b"] * 100,
        "L2": ["c"] * 1000 + ["b"] * 100,
    }


@pytest.fixture
def toy_model(toy_corpora):
    return train(toy_corpora)


@pytest.fixture(scope="session")
def desk_corpora():
    """18 synthetic categories shaped like a many-language identification task."""
    return generate_synthetic_corpora(18, 5000, 3100, 0.5, rng_seed=DESK_SEED, zipf_exponent=1.0)


@pytest.fixture(scope="session")
def desk_report(desk_corpora):
    return run_experiment(desk_corpora, SplitSpec(), DESK_THRESHOLDS, "word")


_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and (report.when == "call" or report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        if report.outcome != "passed" or name not in _acceptance:
            _acceptance[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance.items():
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
