"""Approximant evaluation and ring statistics."""

import dataclasses
import math

import numpy as np
import pytest

from diskfit.errors import ContractError, EvaluationError
from diskfit.evaluate import EvalStats, RingSpec, error_stats, evaluate_approximant, target_summary
from diskfit.fitter import fit
from diskfit.model import (
    BasisElement,
    BasisKind,
    FitProblem,
    Geometry,
    NormKind,
    builtin_target,
    expression_target,
    ring_sources,
)
from diskfit.reference import CASES, TABLE3
from diskfit.reproduce import case_problem
from diskfit.scalars import XComplex

EXT = Geometry.EXTERIOR


def unit_fit(kind, norm):
    problem = FitProblem(EXT, norm, [BasisElement(kind, 0.5)], expression_target("1/z", a1=1))
    result = fit(problem)
    return problem, dataclasses.replace(result, mu=XComplex(np.array([1.0 + 0j])))


def test_single_pole_value():
    problem, result = unit_fit(BasisKind.SIMPLE_POLE, NormKind.SIGMA_EXTERIOR)
    assert complex(evaluate_approximant(result, problem, 2.0)) == pytest.approx(1 / 1.5, rel=1e-30)


def test_log_origin_value():
    problem, result = unit_fit(BasisKind.LOG_ORIGIN, NormKind.D_EXTERIOR)
    value = complex(evaluate_approximant(result, problem, 2.0))
    assert value == pytest.approx(math.log(2 / 1.5), rel=1e-15)
    assert value.real == pytest.approx(0.2876820724, abs=1e-10)


def test_empty_coefficients():
    problem, result = unit_fit(BasisKind.SIMPLE_POLE, NormKind.SIGMA_EXTERIOR)
    empty = dataclasses.replace(result, basis=(), mu=XComplex(np.zeros(0, complex)))
    assert complex(evaluate_approximant(empty, problem, 2.0)) == 0


def test_evaluation_at_source():
    problem, result = unit_fit(BasisKind.SIMPLE_POLE, NormKind.SIGMA_EXTERIOR)
    with pytest.raises(EvaluationError):
        evaluate_approximant(result, problem, 0.5)


def test_target_summary_of_inverse_z():
    stats = target_summary(expression_target("1/z", a1=1), RingSpec(1.0, 1000))
    for key in ("rms", "max_magnitude", "avg_magnitude", "sigma_norm_estimate"):
        assert getattr(stats, key) == pytest.approx(1.0, abs=1e-15)
    assert stats.std_about_mean < 1e-15


def test_target_in_span_has_zero_error():
    problem = FitProblem(EXT, NormKind.SIGMA_EXTERIOR, ring_sources("0.5", 4),
                         expression_target("1/(z - 0.5) - 1/(z + 0.5j)", a1=0))
    stats = error_stats(fit(problem), problem, RingSpec(1.0, 200))
    assert stats.max_magnitude < 1e-20


def test_stats_definitions():
    stats = EvalStats.from_magnitudes([1.0, 3.0])
    assert stats.rms == pytest.approx(math.sqrt(5))
    assert stats.std_about_mean == 1.0
    assert stats.avg_magnitude == 2.0
    assert stats.max_magnitude == 3.0


@pytest.mark.parametrize("number", [2, 15])
def test_case_statistics(number):
    problem = case_problem(CASES[number - 1])
    result = fit(problem)
    _, std1, max1, std2, max2 = TABLE3[number]
    s1 = error_stats(result, problem, RingSpec(1.0, 1000))
    s2 = error_stats(result, problem, RingSpec(2.0, 1000))
    assert s1.rms == pytest.approx(std1, rel=0.05)
    assert s1.max_magnitude == pytest.approx(max1, rel=0.05)
    assert s2.rms == pytest.approx(std2, rel=0.05)
    assert s2.max_magnitude == pytest.approx(max2, rel=0.05)


def test_ring_refinement():
    problem = case_problem(CASES[1])
    result = fit(problem)
    coarse = error_stats(result, problem, RingSpec(1.0, 1000)).sigma_norm_estimate
    fine = error_stats(result, problem, RingSpec(1.0, 2000)).sigma_norm_estimate
    assert abs(fine - coarse) < 1e-6 * coarse


def test_ring_side_checks():
    problem = case_problem(CASES[0])
    result = fit(problem)
    with pytest.raises(ContractError):
        error_stats(result, problem, RingSpec(0.5, 100))
    interior = FitProblem(Geometry.INTERIOR, NormKind.SIGMA_INTERIOR,
                          [BasisElement(BasisKind.SIMPLE_POLE, 2.0)],
                          expression_target("1/(3 - z)", geometry=Geometry.INTERIOR))
    with pytest.raises(ContractError):
        error_stats(fit(interior), interior, RingSpec(2.0, 100))


def test_ring_spec_validation():
    with pytest.raises(ContractError):
        RingSpec(1.0, 0)
    with pytest.raises(ContractError):
        RingSpec(-1.0, 10)


def test_builtin_table_values():
    stats = target_summary(builtin_target("f2"), RingSpec(1.0, 1000))
    assert round(stats.avg_magnitude, 2) == 0.97
    assert round(stats.max_magnitude, 2) == 1.38
