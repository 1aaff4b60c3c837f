import pathlib
import re

import pytest

from commensurate import finite_model_pair, load_model

ROOT = pathlib.Path(__file__).resolve().parent.parent
MODELS = ROOT / "models"

_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter):
    """Print one PASS/FAIL line per acceptance criterion after the run."""
    results = {}
    for reports in terminalreporter.stats.values():
        for rep in reports:
            nodeid = getattr(rep, "nodeid", "")
            match = _CRITERION.search(nodeid)
            if match is None:
                continue
            outcome = getattr(rep, "outcome", None)
            if outcome == "passed" and getattr(rep, "when", None) != "call":
                continue
            if outcome in ("passed", "failed", "skipped"):
                if results.get(nodeid) != "failed":
                    results[nodeid] = outcome
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    word = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}
    for nodeid in sorted(results):
        match = _CRITERION.search(nodeid)
        number, label = match.group(1), match.group(2).replace("_", " ")
        terminalreporter.write_line(
            f"[criterion {number}] {word[results[nodeid]]}: {label}"
        )


@pytest.fixture(scope="session")
def s4_pair():
    return finite_model_pair(load_model(MODELS / "s4.model"))


@pytest.fixture(scope="session")
def s4_d8_pair():
    return finite_model_pair(load_model(MODELS / "s4_d8.model"))


@pytest.fixture(scope="session")
def z8_pair():
    return finite_model_pair(load_model(MODELS / "z8.model"))


@pytest.fixture(scope="session")
def model_pairs(s4_pair, s4_d8_pair, z8_pair):
    return [s4_pair, s4_d8_pair, z8_pair]
