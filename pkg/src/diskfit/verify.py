"""Property suites: closed forms against quadrature, solver invariants and
the gradient/Wirtinger identity.

Every check returns a :class:`~diskfit.reproduce.Criterion`.  Suites are
deterministic: random configurations come from a seeded generator.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from diskfit import oracle, reproduce
from diskfit.fitter import fit
from diskfit.kernels import cauchy_determinant, gram_entry, gram_matrix, moment_entry
from diskfit.linalg import GramSystem
from diskfit.model import (
    BasisElement,
    BasisKind,
    FitProblem,
    Geometry,
    NormKind,
    TargetFunction,
    builtin_target,
    ring_sources,
)
from diskfit.reproduce import Criterion

__all__ = [
    "SUITES",
    "run_suite",
    "oracle_equivalence",
    "hermitian_symmetry",
    "sigma_replication",
    "positive_definite",
    "determinant_identity",
    "eigen_pairing",
    "solve_residual",
    "case_spectra",
    "case_collocation",
    "dipole_equivalence",
    "wirtinger_fields",
    "bergman_route",
]

ORACLE_TOL = 1e-10
HERMITIAN_TOL = 1e-28
DET_TOL = 1e-8
RESIDUAL_TOL = 1e-18
COLLOCATION_TOL = 1e-15
DIPOLE_TOL = 1e-10
WIRTINGER_TOL = 1e-8
BERGMAN_TOL = 1e-8

# property-suite quadrature grid; fine enough for the random source ranges below
N_THETA = 1024
N_R = 96

# basis kinds exercised for every norm
_NORM_KINDS = {
    NormKind.SIGMA_EXTERIOR: ("pole", "pole_order_m", "inverse_z"),
    NormKind.D_EXTERIOR: ("pole", "pole_order_m", "inverse_z", "log_origin", "log_paired"),
    NormKind.SIGMA_INTERIOR: ("pole", "pole_order_m"),
    NormKind.D_INTERIOR: ("pole", "pole_order_m"),
    NormKind.ENERGY_REAL: ("real_log", "real_dipole_x", "real_dipole_y"),
}


def _pairs():
    out = []
    for norm, kinds in _NORM_KINDS.items():
        out.extend((norm, a, b) for a, b in itertools.product(kinds, repeat=2))
    return out


# ---------------------------------------------------------------------------
# random configurations
# ---------------------------------------------------------------------------

def _random_point(rng, geometry):
    theta = rng.uniform(0, 2 * np.pi)
    if geometry is Geometry.EXTERIOR:
        r = rng.uniform(0.1, 0.9)
    else:
        r = rng.uniform(1.15, 3.0)
    return complex(r * np.cos(theta), r * np.sin(theta))


def _random_element(rng, kind, geometry):
    kind = BasisKind(kind)
    if kind is BasisKind.INVERSE_Z:
        return BasisElement(kind)
    z = _random_point(rng, geometry)
    if kind is BasisKind.HIGHER_POLE:
        return BasisElement(kind, z, order=int(rng.integers(2, 6)))
    if kind is BasisKind.LOG_PAIRED:
        return BasisElement(kind, z, paired=_random_point(rng, geometry))
    return BasisElement(kind, z)


def _np_funcs(b, norm):
    """float64 value and derivative of a basis element (or its completion)."""
    a = b.z
    m = b.order
    kind = b.kind
    if norm in (NormKind.SIGMA_INTERIOR, NormKind.D_INTERIOR):
        shift = a ** -m if norm is NormKind.D_INTERIOR else 0.0
        return (lambda z: (a - z) ** -m - shift,
                lambda z: m * (a - z) ** (-m - 1))
    if kind in (BasisKind.SIMPLE_POLE, BasisKind.INVERSE_Z, BasisKind.REAL_DIPOLE_X,
                BasisKind.REAL_DIPOLE_Y):
        c = -1j if kind is BasisKind.REAL_DIPOLE_Y else 1.0
        return (lambda z: c / (z - a), lambda z: -c / (z - a) ** 2)
    if kind is BasisKind.HIGHER_POLE:
        return (lambda z: (z - a) ** -m, lambda z: -m * (z - a) ** (-m - 1))
    if kind in (BasisKind.LOG_ORIGIN, BasisKind.REAL_LOG):
        return (lambda z: -np.log1p(-a / z), lambda z: 1 / z - 1 / (z - a))
    ap = complex(b.paired)
    return (lambda z: np.log1p(-ap / z) - np.log1p(-a / z),
            lambda z: 1 / (z - ap) - 1 / (z - a))


def _random_target(rng, norm):
    """Random pole combination with a float64 twin for quadrature."""
    geometry = norm.geometry
    count = int(rng.integers(1, 4))
    ws = [_random_point(rng, geometry) for _ in range(count)]
    cs = [complex(*rng.normal(size=2)) for _ in range(count)]
    if geometry is Geometry.INTERIOR:
        def func(z):
            return sum(c / (w - z) for c, w in zip(cs, ws))

        def deriv(z):
            return sum(c / (w - z) ** 2 for c, w in zip(cs, ws))
        a1 = None
    else:
        def func(z):
            return sum(c / (z - w) for c, w in zip(cs, ws))

        def deriv(z):
            return sum(-c / (z - w) ** 2 for c, w in zip(cs, ws))
        a1 = sum(cs)
    real = norm is NormKind.ENERGY_REAL
    if real:
        a1 = None
    f = TargetFunction("random poles", func, a1=a1, real=real, geometry=geometry)
    return f, func, deriv


def _grad(g_z):
    """Gradient of ``Re g`` from the derivative of its completion ``g``."""
    def grad(x, y):
        d = g_z(x + 1j * y)
        return d.real, -d.imag
    return grad


def _oracle_ip(norm, f, f_z, g, g_z):
    """Quadrature value of ``(f, g)`` in ``norm``."""
    if norm in (NormKind.SIGMA_EXTERIOR, NormKind.SIGMA_INTERIOR):
        return oracle.sigma_ip_quadrature(f, g, N_THETA)
    if norm is NormKind.ENERGY_REAL:
        return oracle.energy_ip_quadrature(
            None, None, N_R, N_THETA, grad_G=_grad(f_z), grad_H=_grad(g_z))
    return oracle.dirichlet_ip_quadrature(f_z, g_z, norm.geometry, N_R, N_THETA)


# ---------------------------------------------------------------------------
# kernels suite
# ---------------------------------------------------------------------------

def oracle_equivalence(n_configs=200, seed=0):
    """Closed-form Gram entries and moments against brute-force quadrature.

    Configurations cycle through every ordered basis-kind pair of every norm.
    The tolerance is relative to ``max(|ref|, sqrt((b,b)(c,c)))`` so that
    near-orthogonal pairs are judged against the Cauchy-Schwarz bound.
    """
    rng = np.random.default_rng(seed)
    pairs = _pairs()
    worst = 0.0
    worst_what = ""
    failures = 0
    for i in range(n_configs):
        norm, ka, kb = pairs[i % len(pairs)]
        geometry = norm.geometry
        b = _random_element(rng, ka, geometry)
        c = _random_element(rng, kb, geometry)
        f, f_np, f_np_z = _random_target(rng, norm)
        bv, bz = _np_funcs(b, norm)
        cv, cz = _np_funcs(c, norm)

        closed = complex(gram_entry(norm, geometry, b, c))
        ref = _oracle_ip(norm, bv, bz, cv, cz)
        nb = abs(complex(gram_entry(norm, geometry, b, b)))
        nc = abs(complex(gram_entry(norm, geometry, c, c)))
        err = abs(closed - ref) / max(abs(ref), math.sqrt(nb * nc))

        closed_m = complex(moment_entry(norm, geometry, b, f))
        ref_m = _oracle_ip(norm, bv, bz, f_np, f_np_z)
        nf = abs(_oracle_ip(norm, f_np, f_np_z, f_np, f_np_z))
        err_m = abs(closed_m - ref_m) / max(abs(ref_m), math.sqrt(nb * nf))

        for e, what in ((err, f"({ka},{kb}) gram"), (err_m, f"({ka}) moment")):
            if e > ORACLE_TOL:
                failures += 1
            if e > worst:
                worst, worst_what = e, f"{norm.value} {what}"
    return Criterion(
        f"closed form vs oracle ({n_configs} configurations)", failures == 0,
        f"worst relative deviation {worst:.2e} at {worst_what}; {failures} over {ORACLE_TOL:g}")


def hermitian_symmetry(n_pairs=200, seed=1):
    """``(b, c) = conj((c, b))`` in double-double."""
    rng = np.random.default_rng(seed)
    pairs = _pairs()
    worst = 0.0
    for i in range(n_pairs):
        norm, ka, kb = pairs[i % len(pairs)]
        geometry = norm.geometry
        b = _random_element(rng, ka, geometry)
        c = _random_element(rng, kb, geometry)
        bc = gram_entry(norm, geometry, b, c)
        cb = gram_entry(norm, geometry, c, b)
        scale = math.sqrt(abs(complex(gram_entry(norm, geometry, b, b)))
                          * abs(complex(gram_entry(norm, geometry, c, c))))
        gap = float(np.sqrt((bc - cb.conj()).abs2().to_float())) / scale
        worst = max(worst, gap)
    return Criterion(f"Hermitian symmetry ({n_pairs} pairs)", worst <= HERMITIAN_TOL,
                     f"worst relative gap {worst:.2e}")


def _spread_sources(rng, n, geometry, min_gap=0.15):
    pts = []
    while len(pts) < n:
        z = _random_point(rng, geometry)
        if all(abs(z - w) >= min_gap for w in pts):
            pts.append(z)
    return pts


def sigma_replication(n_trials=20, seed=7):
    """``(f, 1/(z - z_k))_sigma = p_k conj(f(p_k*))`` by quadrature."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_trials):
        _, f_np, _ = _random_target(rng, NormKind.SIGMA_EXTERIOR)
        zk = _random_point(rng, Geometry.EXTERIOR)
        p = 1 / zk
        ref = p * np.conj(f_np(1 / np.conj(zk)))
        value = oracle.sigma_ip_quadrature(f_np, lambda z: 1 / (z - zk), N_THETA)
        worst = max(worst, abs(value - ref) / abs(ref))
    return Criterion("standard-norm replication at involution points", worst <= ORACLE_TOL,
                     f"worst relative gap {worst:.2e}")


def positive_definite(n_trials=20, seed=2, max_size=16):
    """Random Gram matrices of up to ``max_size`` sources have positive spectra."""
    rng = np.random.default_rng(seed)
    norms = list(_NORM_KINDS)
    worst = np.inf
    for i in range(n_trials):
        norm = norms[i % len(norms)]
        kind = {NormKind.ENERGY_REAL: BasisKind.REAL_LOG,
                NormKind.D_EXTERIOR: BasisKind.LOG_ORIGIN}.get(norm, BasisKind.SIMPLE_POLE)
        n = int(rng.integers(2, max_size + 1))
        basis = [BasisElement(kind, z) for z in _spread_sources(rng, n, norm.geometry)]
        T = gram_matrix(norm, basis)
        system = GramSystem.build(T, T[:, 0], is_real=norm is NormKind.ENERGY_REAL)
        eigs = system.spectrum().eigenvalues.to_float()
        worst = min(worst, float(eigs.min() / eigs.max()))
    return Criterion(f"positive definite Gram matrices ({n_trials} random)", worst > 0,
                     f"smallest min/max eigenvalue ratio {worst:.2e}")


def determinant_identity(n_trials=12, seed=3, max_size=12):
    """``sqrt(prod eig(realT))`` equals the Cauchy product ``|det T|``."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(n_trials):
        n = 1 + i % max_size
        zs = _spread_sources(rng, n, Geometry.EXTERIOR, min_gap=0.05)
        basis = [BasisElement(BasisKind.SIMPLE_POLE, z) for z in zs]
        T = gram_matrix(NormKind.SIGMA_EXTERIOR, basis)
        spectrum = GramSystem.build(T, T[:, 0]).spectrum()
        eig_route = math.sqrt(float(spectrum.product().hi))
        cauchy = abs(complex(cauchy_determinant(zs)))
        worst = max(worst, abs(eig_route - cauchy) / cauchy)
    return Criterion(f"determinant identity (N = 1..{max_size})", worst <= DET_TOL,
                     f"worst relative gap {worst:.2e}")


# ---------------------------------------------------------------------------
# linalg suite
# ---------------------------------------------------------------------------

def eigen_pairing(seed=4, n=10):
    """Each eigenvalue of a complex T appears twice in its real embedding."""
    rng = np.random.default_rng(seed)
    basis = [BasisElement(BasisKind.SIMPLE_POLE, z)
             for z in _spread_sources(rng, n, Geometry.EXTERIOR)]
    T = gram_matrix(NormKind.D_EXTERIOR, basis)
    eigs = GramSystem.build(T, T[:, 0]).spectrum().eigenvalues.to_float()
    gap = float(np.max(np.abs(eigs[0::2] - eigs[1::2]) / eigs[0::2]))
    return Criterion("eigenvalue pairing of the real embedding", gap <= 1e-20,
                     f"largest relative pair gap {gap:.2e}")


def solve_residual(outputs):
    """``|T mu - A| <= 1e-18 |A|`` for every case with cond <= 1e12."""
    worst = 0.0
    for out in outputs.values():
        if out["condition_number"] <= 1e12:
            worst = max(worst, out["diagnostics"]["residual"])
    return Criterion("solve residual (cond <= 1e12)", worst <= RESIDUAL_TOL,
                     f"worst relative residual {worst:.2e}")


def case_spectra(outputs):
    """Hermitian Gram matrices with positive spectra for all reproduction cases."""
    herm = max(out["diagnostics"]["hermitian_deviation"] for out in outputs.values())
    bad = [name for name, out in outputs.items() if out["diagnostics"]["min_eigenvalue"] <= 0]
    ok = herm <= HERMITIAN_TOL and not bad
    detail = f"worst Hermitian deviation {herm:.2e}; "
    detail += "all spectra positive" if not bad else f"non-positive eigenvalue in {bad}"
    return Criterion("Gram symmetry and positive spectra (reproduction cases)", ok, detail)


def case_collocation(outputs):
    """Collocation residuals within ``1e-15 * scale`` for cases with cond <= 1e10."""
    worst = 0.0
    count = 0
    for out in outputs.values():
        if out["condition_number"] <= 1e10:
            d = out["diagnostics"]
            worst = max(worst, d["collocation_max"] / d["collocation_scale"])
            count += 1
    return Criterion(f"collocation at involution points ({count} cases)",
                     worst <= COLLOCATION_TOL, f"worst scaled residual {worst:.2e}")


def reproduction_outputs(jobs=1):
    """Raw fit diagnostics for every tabulated case and real-plane variant."""
    outputs = {f"case {k}": v for k, v in reproduce.run_table23(jobs=jobs).raw.items()}
    for name, out in reproduce.run_r2case(jobs=jobs).raw.items():
        outputs[f"r2 {name}"] = out
    return outputs


def dipole_equivalence(radius="0.4", count=8):
    """Energy fit with x/y dipoles against the Dirichlet pole fit of the completion.

    The two problems share a minimiser, so ``mu_k = alpha_k - i beta_k``.
    """
    target = builtin_target("F_real")
    sources = ring_sources(radius, count)
    basis = [BasisElement(k, b.location) for b in sources
             for k in (BasisKind.REAL_DIPOLE_X, BasisKind.REAL_DIPOLE_Y)]
    energy = fit(FitProblem(Geometry.EXTERIOR, NormKind.ENERGY_REAL, basis, target))
    complex_target = TargetFunction("F_real completion", target.func, a1=0,
                                    geometry=Geometry.EXTERIOR)
    dirichlet = fit(FitProblem(Geometry.EXTERIOR, NormKind.D_EXTERIOR, sources, complex_target))
    coeffs = energy.mu.re.to_float()
    alpha, beta = coeffs[0::2], coeffs[1::2]
    mu = dirichlet.mu.to_complex()
    gap = float(np.max(np.abs(mu - (alpha - 1j * beta))) / np.max(np.abs(mu)))
    return Criterion("real dipole fit equals complex Dirichlet fit", gap <= DIPOLE_TOL,
                     f"relative coefficient gap {gap:.2e}")


# ---------------------------------------------------------------------------
# gradient identity suite
# ---------------------------------------------------------------------------

FIELDS = {
    "analytic": lambda z, zb: 1 / z,
    "antianalytic": lambda z, zb: zb,
    "mixed": lambda z, zb: z + zb ** 2,
}


def wirtinger_fields(n_points=100, seed=5):
    """Gradient and Wirtinger forms agree for analytic, antianalytic and mixed fields."""
    rng = np.random.default_rng(seed)
    r = rng.uniform(1.1, 3.0, n_points)
    theta = rng.uniform(0, 2 * np.pi, n_points)
    pts = r * np.exp(1j * theta)
    out = []
    for name, field_ in FIELDS.items():
        dev = oracle.wirtinger_identity_check(field_, pts)
        out.append(Criterion(f"gradient/Wirtinger identity, {name} field",
                             dev <= WIRTINGER_TOL, f"max deviation {dev:.2e}"))
    return out


def bergman_route(n_trials=10, seed=6):
    """Area quadrature of derivatives in ``v = 1/r^2`` matches the Dirichlet quadrature."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(n_trials):
        geometry = Geometry.EXTERIOR if i % 2 == 0 else Geometry.INTERIOR
        norm = NormKind.D_EXTERIOR if geometry is Geometry.EXTERIOR else NormKind.D_INTERIOR
        _, _, fz = _random_target(rng, norm)
        _, _, gz = _random_target(rng, norm)
        a = oracle.dirichlet_ip_quadrature(fz, gz, geometry, N_R, N_THETA)
        b = oracle.bergman_ip_quadrature(fz, gz, geometry, N_R, N_THETA)
        na = abs(oracle.dirichlet_ip_quadrature(fz, fz, geometry, N_R, N_THETA))
        nb = abs(oracle.dirichlet_ip_quadrature(gz, gz, geometry, N_R, N_THETA))
        worst = max(worst, abs(a - b) / max(abs(a), math.sqrt(na * nb)))
    return Criterion("Dirichlet/Bergman dual route", worst <= BERGMAN_TOL,
                     f"worst relative gap {worst:.2e}")


# ---------------------------------------------------------------------------
# suite runner
# ---------------------------------------------------------------------------

def _kernels_suite(**_):
    return [oracle_equivalence(), hermitian_symmetry(), sigma_replication(), positive_definite(),
            determinant_identity()]


def _linalg_suite(outputs=None, jobs=1, **_):
    if outputs is None:
        outputs = reproduction_outputs(jobs)
    return [eigen_pairing(), solve_residual(outputs), case_spectra(outputs),
            case_collocation(outputs), dipole_equivalence()]


def _identity_suite(**_):
    return wirtinger_fields() + [bergman_route()]


SUITES = {
    "kernels": _kernels_suite,
    "linalg": _linalg_suite,
    "appendixB": _identity_suite,
}


def run_suite(name, jobs=1, outputs=None):
    """Run one suite (or ``"all"``) and return its criteria."""
    if name == "all":
        out = []
        for key in SUITES:
            out.extend(run_suite(key, jobs, outputs))
        return out
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES) + ['all']}")
    return SUITES[name](jobs=jobs, outputs=outputs)
