"""Acceptance criteria, one PASS/FAIL line each at the stated tolerances.

Published reference values live in ``diskfit.reference``.  A failing line is
reported as such; nothing here is loosened to make it pass.
"""

import pytest

from conftest import ACCEPTANCE_LINES
from diskfit import reference, reproduce, verify


def record(key, title, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'} criterion {key} {title}: {detail}"
    ACCEPTANCE_LINES[key] = line
    print(line)
    assert passed, line


def _failures(criteria):
    return [c for c in criteria if not c.passed]


def test_criterion_1_table1():
    report = reproduce.run_table1()
    bad = _failures(report.criteria)
    detail = f"{len(report.criteria) - len(bad)}/{len(report.criteria)} cells match to 2 decimals"
    if bad:
        detail += "; mismatched: " + "; ".join(f"{c.name} ({c.detail})" for c in bad)
    record("1", "target magnitudes on the unit circle", not bad, detail)


def _case_criteria(report, extreme):
    wanted = {s.number for s in reference.CASES
              if (reference.TABLE3[s.number][0] > 1e12) == extreme}
    return [c for c in report.criteria if int(c.name.split()[1]) in wanted]


def test_criterion_2_well_conditioned(table23_report):
    crit = _case_criteria(table23_report, extreme=False)
    bad = _failures(crit)
    detail = f"{len(crit) - len(bad)}/{len(crit)} cases within 5%"
    if bad:
        detail += "; failing: " + "; ".join(f"{c.name} [{c.detail}]" for c in bad)
    record("2", "well-conditioned cases", not bad, detail)


def test_criterion_3_extreme(table23_report, r2_report):
    crit = _case_criteria(table23_report, extreme=True)
    crit += [c for c in r2_report.criteria if c.name == "r2 R_B=0.01"]
    bad = _failures(crit)
    detail = "; ".join(f"{c.name} {'ok' if c.passed else 'off'} [{c.detail}]" for c in crit)
    record("3", "extreme-conditioning cases", not bad, detail)


def test_criterion_4_determinant():
    report = reproduce.run_detcheck()
    bad = _failures(report.criteria)
    record("4", "determinant cross-check", not bad,
           "; ".join(f"{c.name}: {c.detail}" for c in report.criteria))


def test_criterion_5_real_plane(r2_report):
    crit = [c for c in r2_report.criteria if c.name in ("r2 full solve", "r2 drop-1 truncation")]
    assert len(crit) == 2
    bad = _failures(crit)
    record("5", "real-plane logarithmic case", not bad,
           "; ".join(f"{c.name}: {c.detail}" for c in crit))


PROPERTY_CHECKS = {
    "6a": ("closed form vs oracle", lambda outputs: [verify.oracle_equivalence(200)]),
    "6b": ("Hermitian symmetry and positive spectra",
           lambda outputs: [verify.case_spectra(outputs)]),
    "6c": ("collocation residuals", lambda outputs: [verify.case_collocation(outputs)]),
    "6d": ("real dipole equivalence", lambda outputs: [verify.dipole_equivalence()]),
    "6e": ("gradient/Wirtinger identity", lambda outputs: verify.wirtinger_fields(100)),
    "6f": ("Dirichlet/Bergman dual route", lambda outputs: [verify.bergman_route()]),
}


@pytest.mark.parametrize("key", sorted(PROPERTY_CHECKS))
def test_criterion_6_properties(key, reproduction_outputs):
    title, run = PROPERTY_CHECKS[key]
    crit = run(reproduction_outputs)
    bad = _failures(crit)
    record(key, title, not bad, "; ".join(f"{c.name}: {c.detail}" for c in crit))
