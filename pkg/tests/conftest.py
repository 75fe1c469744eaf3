from __future__ import annotations

import sys
from pathlib import Path

import pytest

from contract_es.model import load_contract

TESTS = Path(__file__).parent
DATA = TESTS / "data"

# helper modules (oracles, strategies, corpus) live next to the tests
sys.path.insert(0, str(TESTS))


def load(name: str):
    return load_contract(DATA / f"{name}.contract")


@pytest.fixture
def toys():
    return load("toys")


@pytest.fixture
def toys_standard():
    return load("toys_standard")


@pytest.fixture
def handshake():
    return load("handshake")


@pytest.fixture
def chain():
    return load("chain")


@pytest.fixture
def circular():
    return load("circular")


@pytest.fixture
def toys_parts():
    return [load("toys_A"), load("toys_B"), load("toys_C")]


_acceptance: list[tuple[str, str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    doc = next((m for m in report.user_properties if m[0] == "criterion"), None)
    label = doc[1] if doc else name
    _acceptance.append(("PASS" if report.passed else "FAIL", name, label))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for status, name, label in _acceptance:
        terminalreporter.write_line(f"{status}  {name}: {label}")
