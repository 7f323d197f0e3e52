import os
from pathlib import Path

import pytest

DATA = Path(__file__).resolve().parents[1] / "data"
os.environ.setdefault("SHIFTSVM_DATA", str(DATA))


def pytest_addoption(parser):
    parser.addoption("--paper-scale", action="store_true", default=False,
                     help="run the 100-repetition grid (hours)")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long cross-validation runs")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--paper-scale"):
        return
    skip = pytest.mark.skip(reason="paper-scale run; enable with --paper-scale")
    for item in items:
        if "paper_scale" in item.keywords:
            item.add_marker(skip)


# -- acceptance summary: one line per criterion ---------------------------------

_CRITERIA = {}


@pytest.fixture
def record():
    """``record(number, status, detail)`` with status PASS, FAIL or SKIP.

    Several records for one criterion are merged: any FAIL wins; PASS mixed
    with SKIP is shown as PARTIAL, since part of the criterion was not run.
    """
    def _record(number, status, detail):
        _CRITERIA.setdefault(number, []).append((status, detail))
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entries = _CRITERIA[number]
        statuses = {s for s, _ in entries}
        if "FAIL" in statuses:
            status = "FAIL"
        elif "PASS" in statuses:
            status = "PARTIAL" if "SKIP" in statuses else "PASS"
        else:
            status = "SKIP"
        detail = "; ".join(d for _, d in entries)
        terminalreporter.write_line(f"criterion {number}: {status} - {detail}")
