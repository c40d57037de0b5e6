"""Evaluation of approximants and ring statistics of fit errors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from diskfit import scalars
from diskfit.errors import ContractError, EvaluationError
from diskfit.model import BasisKind, Geometry, NormKind, to_xreal
from diskfit.scalars import Jet, XComplex, as_xcomplex

__all__ = [
    "RingSpec",
    "EvalStats",
    "basis_value",
    "evaluate_approximant",
    "error_stats",
    "target_summary",
]


@dataclass(frozen=True)
class RingSpec:
    """``count`` points ``R_E exp(i(offset + 2 pi j / count))``, ``j = 0..count-1``."""

    radius: float = 1.0
    count: int = 1000
    offset: float = 0.0

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 1:
            raise ContractError(f"ring count must be a positive integer, got {self.count}")
        if float(to_xreal(self.radius).hi) <= 0:
            raise ContractError("ring radius must be positive")

    def points(self):
        j = np.arange(self.count, dtype=float)
        theta = scalars.PI * (2.0 * j) / float(self.count)
        if self.offset:
            theta = theta + self.offset
        r = to_xreal(self.radius)
        return XComplex(scalars.cos(theta) * r, scalars.sin(theta) * r)


@dataclass(frozen=True)
class EvalStats:
    """Summary of ``|g|`` sampled on a ring.

    ``rms`` is the root mean square, ``std_about_mean`` the population
    standard deviation about the mean magnitude, and ``sigma_norm_estimate``
    the discrete standard-norm estimate (equal to ``rms``).
    """

    rms: float
    std_about_mean: float
    max_magnitude: float
    avg_magnitude: float
    sigma_norm_estimate: float

    @classmethod
    def from_magnitudes(cls, mags):
        mags = np.asarray(mags, dtype=float)
        avg = float(np.mean(mags))
        rms = float(np.sqrt(np.mean(mags * mags)))
        std = float(np.sqrt(np.mean((mags - avg) ** 2)))
        return cls(rms, std, float(np.max(mags)), avg, rms)

    def as_dict(self):
        return {
            "rms": self.rms,
            "std_about_mean": self.std_about_mean,
            "max_magnitude": self.max_magnitude,
            "avg_magnitude": self.avg_magnitude,
            "sigma_norm_estimate": self.sigma_norm_estimate,
        }


def _interior(problem):
    return problem.geometry is Geometry.INTERIOR


def basis_value(b, z, norm):
    """Value of one basis element (or its standard completion) at ``z``."""
    kind = b.kind
    a = b.location
    if norm in (NormKind.SIGMA_INTERIOR, NormKind.D_INTERIOR):
        m = b.order
        value = (a - z) ** -m
        if norm is NormKind.D_INTERIOR:
            value = value - a ** -m
        return value
    if kind in (BasisKind.SIMPLE_POLE, BasisKind.INVERSE_Z, BasisKind.REAL_DIPOLE_X):
        return 1 / (z - a)
    if kind is BasisKind.REAL_DIPOLE_Y:
        return (1 / (z - a)) * -1j
    if kind is BasisKind.HIGHER_POLE:
        return (z - a) ** -b.order
    if kind in (BasisKind.LOG_ORIGIN, BasisKind.REAL_LOG):
        return -scalars.log1p(-(a / z))
    if kind is BasisKind.LOG_PAIRED:
        return scalars.log1p(-(b.paired / z)) - scalars.log1p(-(a / z))
    raise ContractError(f"unsupported basis kind {kind}")


def basis_a1(b):
    """Coefficient of ``1/z`` in the expansion of an exterior basis element."""
    kind = b.kind
    if kind in (BasisKind.SIMPLE_POLE, BasisKind.INVERSE_Z):
        return XComplex(np.asarray(1 + 0j))
    if kind is BasisKind.HIGHER_POLE:
        return XComplex(np.asarray(0j))
    if kind is BasisKind.LOG_ORIGIN:
        return b.location
    if kind is BasisKind.LOG_PAIRED:
        return b.location - b.paired
    raise ContractError(f"no 1/z coefficient defined for {kind.value}")


def _check_points(problem, z):
    if isinstance(z, Jet):
        return
    zz = as_xcomplex(z)
    for b in problem.basis:
        for point in (b.location, b.paired):
            if point is not None and np.any((zz - point).abs2().hi == 0):
                raise EvaluationError(f"evaluation point coincides with source {b.describe()}")
    if not _interior(problem) and np.any(zz.abs2().hi == 0):
        raise EvaluationError("the origin is not in the exterior field region")


def evaluate_approximant(result, problem, z):
    """``sum_k mu_k B_k(z)``.

    For energy-norm problems the value is the standard completion; take its
    real part for the harmonic approximant.  ``z`` may be a number, numpy
    array, ``XComplex`` or jet.
    """
    basis = result.basis
    if len(basis) == 0:
        return XComplex.zeros(np.shape(z)) if not isinstance(z, Jet) else 0
    _check_points(problem, z)
    zz = z if isinstance(z, Jet) else as_xcomplex(z)
    total = 0
    for k, b in enumerate(basis):
        total = total + result.mu[k] * basis_value(b, zz, problem.norm)
    return total


def _deviation_magnitudes(result, problem, points):
    f = as_xcomplex(problem.target.eval(points))
    phi = as_xcomplex(evaluate_approximant(result, problem, points))
    d = f - phi
    if problem.is_real:
        return np.abs(d.re.to_float())
    return scalars.sqrt(d.abs2()).to_float()


def _check_ring(problem, ring):
    r = float(to_xreal(ring.radius).hi)
    if _interior(problem) and r > 1.0:
        raise ContractError(f"interior problems are evaluated on R_E <= 1, got {r}")
    if not _interior(problem) and r < 1.0:
        raise ContractError(f"exterior problems are evaluated on R_E >= 1, got {r}")


def error_stats(result, problem, ring):
    """Statistics of ``|f - phi|`` over a ring."""
    _check_ring(problem, ring)
    return EvalStats.from_magnitudes(_deviation_magnitudes(result, problem, ring.points()))


def target_summary(f, ring):
    """Average, maximum and discrete standard norm of ``|f|`` on a ring."""
    values = as_xcomplex(f.eval(ring.points()))
    if f.real:
        mags = np.abs(values.re.to_float())
    else:
        mags = scalars.sqrt(values.abs2()).to_float()
    return EvalStats.from_magnitudes(mags)
