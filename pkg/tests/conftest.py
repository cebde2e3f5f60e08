from __future__ import annotations

import pytest

from skewci.cli import _presentation, load_manifest

BUNDLED = ("eg1", "eg2", "eg3", "eg4", "eg4-generic", "clifford2", "skewS")

# (criterion, label, passed, detail) lines collected by tests/test_acceptance.py
ACCEPTANCE: list = []


def manifest_presentation(name: str) -> tuple:
    m = load_manifest(name)
    p, _ = _presentation(m)
    return m, p


@pytest.fixture(scope="session")
def bundled():
    return {name: manifest_presentation(name) for name in BUNDLED}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, label, passed, detail in ACCEPTANCE:
        status = "PASS" if passed else "FAIL"
        extra = f" ({detail})" if detail else ""
        terminalreporter.write_line(f"[{status}] criterion {criterion}: {label}{extra}")
