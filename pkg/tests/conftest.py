from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import fuzzcorpus  # noqa: E402
from lard.forge import ConnectiveList, CueList  # noqa: E402
from lard.lexicon import default_lexicon  # noqa: E402
from lard.resources import resource_path  # noqa: E402
from lard.scorer import StaticVectors  # noqa: E402
from lard.textcore import FluentSentence  # noqa: E402

# filled in by tests/test_acceptance.py, printed after the run
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when != "call" and not report.failed:
        return
    props = dict(report.user_properties)
    name = props.get("criterion", report.nodeid.split("::")[-1])
    if report.passed:
        detail = props.get("detail", "")
    else:
        lines = report.longreprtext.strip().splitlines()
        detail = lines[-1] if lines else "failed"
    ACCEPTANCE_RESULTS.append((name, report.passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")


@pytest.fixture(scope="session")
def lex():
    return default_lexicon()


@pytest.fixture(scope="session")
def vectors():
    return StaticVectors.load(resource_path("vectors.txt"))


@pytest.fixture(scope="session")
def cues():
    return CueList.load()


@pytest.fixture(scope="session")
def connectives():
    return ConnectiveList.load()


def fluent_corpus(n: int, seed: int) -> list[FluentSentence]:
    return [FluentSentence.from_text(str(i), text) for i, text in enumerate(fuzzcorpus.corpus(n, seed))]


@pytest.fixture(scope="session")
def fuzz_small():
    return fluent_corpus(3000, seed=5)
