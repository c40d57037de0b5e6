import os

import pytest

from diskfit import reproduce

JOBS = min(4, os.cpu_count() or 1)

# PASS/FAIL lines collected by the acceptance tests, echoed in the terminal summary
ACCEPTANCE_LINES = {}


@pytest.fixture(scope="session")
def table23_report():
    return reproduce.run_table23(jobs=JOBS)


@pytest.fixture(scope="session")
def r2_report():
    return reproduce.run_r2case(jobs=JOBS)


@pytest.fixture(scope="session")
def reproduction_outputs(table23_report, r2_report):
    outputs = {f"case {k}": v for k, v in table23_report.raw.items()}
    outputs.update({f"r2 {k}": v for k, v in r2_report.raw.items()})
    return outputs


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
