from pathlib import Path

import pytest

from bpcheck.process import load_process

MODELS = Path(__file__).resolve().parent.parent / "models"


@pytest.fixture
def models():
    return MODELS


@pytest.fixture
def intro():
    return load_process(MODELS / "intro.bp")


@pytest.fixture
def swapped():
    return load_process(MODELS / "intro_swapped.bp")


@pytest.fixture
def running():
    return load_process(MODELS / "running.bp")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
