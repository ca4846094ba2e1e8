from __future__ import annotations

import pytest

from ellfib.catalog import load_builtin, verify_all

# Filled by tests/test_acceptance.py: criterion number -> (passed, description).
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def catalog():
    return load_builtin()


@pytest.fixture(scope="session")
def deep_report(catalog):
    """One full deep verification run shared by every test that needs it."""
    return verify_all(catalog, deep=True)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, desc = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {desc}")
