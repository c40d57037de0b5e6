"""Assembly, solution and self-checks of a least-squares fit."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from diskfit import kernels, scalars
from diskfit.errors import ContractError
from diskfit.evaluate import basis_a1, evaluate_approximant
from diskfit.linalg import GramSystem, Spectrum
from diskfit.model import BasisKind, FitProblem, NormKind, TargetFunction
from diskfit.scalars import XComplex, XReal, xsum

__all__ = [
    "FitResult",
    "ordered_basis",
    "assemble",
    "fit",
    "collocation_check",
    "diagnostics",
    "objective",
]

PRECISIONS = ("extended", "double")


@dataclass(frozen=True, eq=False)
class FitResult:
    """Outcome of :func:`fit`.

    ``mu[k]`` multiplies ``basis[k]``; ``basis`` is the problem basis with any
    ``inverse_z`` element moved to the end.  ``eigenvalues`` are those of
    ``T`` (each appears twice in the real embedding ``spectrum``).
    """

    basis: tuple
    mu: XComplex
    system: GramSystem
    spectrum: Spectrum
    eigenvalues: XReal
    condition_number: XReal
    retained_condition: XReal
    drop_count: int = 0
    determinant_check: Optional[tuple] = None
    collocation_residuals: list = field(default_factory=list)
    cost_drop: XReal = None
    precision: str = "extended"

    @property
    def mu_complex(self):
        return self.mu.to_complex()


def ordered_basis(problem):
    """Basis in solve order: user order, augmentation (``inverse_z``) last."""
    main = [b for b in problem.basis if b.kind is not BasisKind.INVERSE_Z]
    extra = [b for b in problem.basis if b.kind is BasisKind.INVERSE_Z]
    return tuple(main + extra)


def assemble(problem, precision="extended"):
    """Gram matrix and moment vector of a problem.

    ``precision="double"`` rounds every entry to float64 after assembly; the
    solve itself always runs in double-double.
    """
    if not isinstance(problem, FitProblem):
        raise ContractError("expected a FitProblem")
    if precision not in PRECISIONS:
        raise ContractError(f"assembly precision must be one of {PRECISIONS}, got {precision!r}")
    basis = ordered_basis(problem)
    T = kernels.gram_matrix(problem.norm, basis)
    A = kernels.moment_vector(problem.norm, basis, problem.target)
    system = GramSystem.build(T, A, is_real=problem.is_real)
    if precision == "double":
        system = system.rounded()
    return system


def _t_eigenvalues(spectrum, is_real):
    """Collapse the doubled spectrum of a real embedding."""
    if is_real:
        return spectrum.eigenvalues
    return spectrum.eigenvalues[::2]


def _determinant_check(problem, basis, spectrum):
    if problem.norm is not NormKind.SIGMA_EXTERIOR:
        return None
    if any(b.kind is not BasisKind.SIMPLE_POLE for b in basis):
        return None
    if any(np.all(b.location.abs2().hi == 0) for b in basis):
        return None
    eig_route = scalars.sqrt(spectrum.product())
    cauchy = kernels.cauchy_determinant([b.location for b in basis])
    return eig_route, cauchy


def fit(problem, precision="extended", drop_count=0):
    """Solve the normal equations of ``problem``.

    Parameters
    ----------
    problem : FitProblem
    precision : {"extended", "double"}
        Assembly precision.
    drop_count : int
        Number of smallest eigenvalues of ``T`` excluded from the solve.
    """
    basis = ordered_basis(problem)
    system = assemble(problem, precision)
    spectrum = system.spectrum()
    mu, retained = system.solve(drop_count, spectrum)
    if problem.is_real:
        mu = XComplex(mu.re, XReal.zeros(mu.shape))
    eigs = _t_eigenvalues(spectrum, problem.is_real)
    cost = xsum((mu.conj() * system.A).re) if len(basis) else XReal(0.0)
    result = FitResult(
        basis=basis,
        mu=mu,
        system=system,
        spectrum=spectrum,
        eigenvalues=eigs,
        condition_number=spectrum.condition_number,
        retained_condition=retained,
        drop_count=int(drop_count),
        determinant_check=_determinant_check(problem, basis, spectrum),
        cost_drop=cost,
        precision=precision,
    )
    residuals = collocation_check(result, problem)
    object.__setattr__(result, "collocation_residuals", residuals)
    return result


def approximant_target(result, problem):
    """The fitted approximant wrapped as a target function."""
    a1 = None
    if problem.geometry.value == "exterior" and not problem.is_real:
        a1 = XComplex.zeros(())
        for k, b in enumerate(result.basis):
            a1 = a1 + result.mu[k] * basis_a1(b)
    return TargetFunction(
        label="approximant",
        func=lambda z: evaluate_approximant(result, problem, z),
        a1=a1,
        real=problem.is_real,
        geometry=problem.geometry,
    )


def _collocation_weight(norm, b):
    """Scale turning a moment difference into the replicated quantity."""
    if b.kind is BasisKind.INVERSE_Z:
        return 1.0 if norm is NormKind.SIGMA_EXTERIOR else 0.5
    r = abs(b.z)
    if norm in (NormKind.SIGMA_EXTERIOR, NormKind.SIGMA_INTERIOR):
        return 1.0 / r if r else 1.0
    if b.kind in (BasisKind.LOG_ORIGIN, BasisKind.LOG_PAIRED, BasisKind.REAL_LOG):
        return 0.5
    return 0.5 / (r * r) if r else 0.5


def collocation_check(result, problem):
    """Mismatch of the replicated quantity at each conjugate involution point.

    For every basis element the closed-form moment functional is applied to
    both the target and the fitted approximant (evaluated directly, not
    through ``T``).  The difference, divided by the element's moment scale,
    is ``|df(p*)|`` for standard-norm and logarithmic fits, ``|df_z(p*)|``
    for Dirichlet pole fits, ``|dF(P)|`` for energy log fits and ``|da1|``
    for the ``1/z`` augmentation.
    """
    phi = approximant_target(result, problem)
    out = []
    for b in result.basis:
        a_f = kernels.moment_entry(problem.norm, problem.geometry, b, problem.target)
        a_phi = kernels.moment_entry(problem.norm, problem.geometry, b, phi)
        d = a_f - a_phi
        mag = float(np.sqrt(d.abs2().to_float()))
        out.append(mag / _collocation_weight(problem.norm, b))
    return out


def objective(result, mu):
    """``mu^H T mu - 2 Re(mu^H A)``: the fit error ``Phi`` minus ``||f||^2``."""
    system = result.system
    mu = scalars.as_xcomplex(mu)
    Tmu = xsum(system.T * mu.reshape(1, -1), axis=1)
    quad = xsum((mu.conj() * Tmu).re)
    lin = xsum((mu.conj() * system.A).re)
    return quad - lin * 2.0


def _max_mod(x):
    return float(np.max(np.sqrt(x.abs2().to_float()), initial=0.0))


def diagnostics(result, problem):
    """Plain-float health summary of a fit.

    ``hermitian_deviation`` is ``max|T - T^H| / max|T|``; ``residual`` is
    ``max|T mu - A| / max|A|``; ``collocation_scale`` is the largest replicated
    target quantity, against which ``collocation_max`` is judged.
    """
    system = result.system
    T = system.T
    t_max = _max_mod(T)
    herm = _max_mod(T - T.T.conj()) / t_max if t_max else 0.0
    a_max = _max_mod(system.A)
    res = _max_mod(system.residual(result.mu)) / a_max if a_max else 0.0
    scale = 0.0
    for k, b in enumerate(result.basis):
        a_k = float(np.sqrt(system.A[k].abs2().to_float()))
        scale = max(scale, a_k / _collocation_weight(problem.norm, b))
    eigs = result.eigenvalues.to_float()
    return {
        "hermitian_deviation": herm,
        "min_eigenvalue": float(np.min(eigs)),
        "max_eigenvalue": float(np.max(eigs)),
        "residual": res,
        "collocation_max": max(result.collocation_residuals, default=0.0),
        "collocation_scale": max(scale, 1.0),
    }
