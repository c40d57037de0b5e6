"""Closed-form inner products, checked against quadrature and direct formulas."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diskfit import oracle
from diskfit.errors import ConfigError, ContractError, DomainError
from diskfit.kernels import (
    cauchy_determinant,
    gram_entry,
    gram_matrix,
    involution_point,
    moment_entry,
    moment_vector,
)
from diskfit.model import (
    BasisElement,
    BasisKind,
    Geometry,
    NormKind,
    TargetFunction,
    builtin_target,
    expression_target,
    ring_sources,
)
from diskfit.scalars import XComplex

EXT = Geometry.EXTERIOR
INT = Geometry.INTERIOR
SIG = NormKind.SIGMA_EXTERIOR
DIR = NormKind.D_EXTERIOR


def el(kind, z=0, **kw):
    return BasisElement(BasisKind(kind), z, **kw)


def c(x):
    return complex(x)


# --- reference values ------------------------------------------------------

def test_sigma_pole_diagonal():
    assert c(gram_entry(SIG, EXT, el("pole", 0.6), el("pole", 0.6))) == pytest.approx(1.5625, rel=1e-15)
    assert c(oracle.sigma_ip_quadrature(lambda z: 1 / (z - 0.6), lambda z: 1 / (z - 0.6))) == \
        pytest.approx(1.5625, rel=1e-14)


def test_dirichlet_pole_diagonal():
    assert c(gram_entry(DIR, EXT, el("pole", 0.6), el("pole", 0.6))) == pytest.approx(1.220703125, rel=1e-15)


def test_dirichlet_log_diagonal():
    value = c(gram_entry(DIR, EXT, el("log_origin", 0.6), el("log_origin", 0.6)))
    assert value == pytest.approx(-0.5 * math.log(0.64), rel=1e-15)
    assert value == pytest.approx(0.2231435513, abs=1e-10)


def test_inverse_z_entries():
    iz = el("inverse_z")
    assert c(gram_entry(SIG, EXT, iz, iz)) == 1
    assert c(gram_entry(SIG, EXT, iz, el("pole", 0.3 + 0.2j))) == 1
    assert c(gram_entry(DIR, EXT, iz, iz)) == 0.5
    assert c(gram_entry(DIR, EXT, el("pole", 0.3 - 0.1j), iz)) == 0.5


def test_inverse_z_log_cross_term():
    # (1/z, psi_k)_D = z_k / 2: the log basis has 1/z coefficient z_k
    zk = 0.3 + 0.4j
    got = c(gram_entry(DIR, EXT, el("inverse_z"), el("log_origin", zk)))
    assert got == pytest.approx(zk / 2, rel=1e-15)
    ref = oracle.dirichlet_ip_quadrature(lambda z: -1 / z ** 2, lambda z: 1 / z - 1 / (z - zk),
                                         n_r=96, n_theta=512)
    assert ref == pytest.approx(got, rel=1e-10)


def test_moment_examples():
    f = expression_target("1/z", a1=1)
    assert c(moment_entry(SIG, EXT, el("pole", 0.5), f)) == pytest.approx(1, rel=1e-30)
    assert c(moment_entry(DIR, EXT, el("pole", 0.5), f)) == pytest.approx(0.5, rel=1e-30)
    assert c(moment_entry(DIR, EXT, el("log_origin", 0.5), f)) == pytest.approx(0.25, rel=1e-30)


def test_inverse_z_moment_needs_a1():
    f = expression_target("1/(z - 0.2)")
    with pytest.raises(ConfigError):
        moment_entry(SIG, EXT, el("inverse_z"), f)
    g = expression_target("1/(z - 0.2)", a1=1)
    assert c(moment_entry(SIG, EXT, el("inverse_z"), g)) == 1
    assert c(moment_entry(DIR, EXT, el("inverse_z"), g)) == 0.5


def test_incompatible_norm_basis():
    with pytest.raises(ContractError):
        gram_entry(SIG, EXT, el("log_origin", 0.5), el("pole", 0.5))
    with pytest.raises(ContractError):
        gram_entry(DIR, EXT, el("real_log", 0.5), el("pole", 0.5))
    with pytest.raises(ContractError):
        gram_entry(DIR, INT, el("pole", 2.0), el("pole", 3.0))


# --- interior and real-plane forms -----------------------------------------

def test_interior_forms():
    a, b = 2.0 + 0.5j, -1.5 + 1j
    w = b * np.conj(a)
    assert c(gram_entry(NormKind.SIGMA_INTERIOR, INT, el("pole", a), el("pole", b))) == \
        pytest.approx(1 / (w - 1), rel=1e-15)
    assert c(gram_entry(NormKind.D_INTERIOR, INT, el("pole", a), el("pole", b))) == \
        pytest.approx(0.5 / (w - 1) ** 2, rel=1e-15)


def test_interior_zeta_oracle():
    ref = oracle.dirichlet_ip_quadrature(lambda z: 1 / (2 - z) ** 2, lambda z: 1 / (2 - z) ** 2, INT)
    assert ref == pytest.approx(0.5 / 9, rel=1e-12)
    assert c(gram_entry(NormKind.D_INTERIOR, INT, el("pole", 2.0), el("pole", 2.0))) == \
        pytest.approx(0.5 / 9, rel=1e-15)


def test_energy_log_diagonal():
    value = c(gram_entry(NormKind.ENERGY_REAL, EXT, el("real_log", 0.4), el("real_log", 0.4)))
    assert value == pytest.approx(-0.5 * math.log(1 - 0.16), rel=1e-15)


def test_energy_dipoles_are_real_parts_of_dirichlet():
    a, b = 0.3 + 0.1j, -0.2 + 0.5j
    d = c(gram_entry(DIR, EXT, el("pole", a), el("pole", b)))
    E = NormKind.ENERGY_REAL
    assert c(gram_entry(E, EXT, el("real_dipole_x", a), el("real_dipole_x", b))) == pytest.approx(d.real)
    assert c(gram_entry(E, EXT, el("real_dipole_x", a), el("real_dipole_y", b))) == \
        pytest.approx((-1j * d).real)
    assert c(gram_entry(E, EXT, el("real_dipole_y", a), el("real_dipole_y", b))) == pytest.approx(d.real)


# --- higher-order poles ------------------------------------------------------

@pytest.mark.parametrize("m", [2, 3, 5])
@pytest.mark.parametrize("norm", [SIG, DIR])
def test_higher_pole_against_quadrature(norm, m):
    a, b = 0.4 + 0.3j, -0.5 + 0.2j
    got = c(gram_entry(norm, EXT, el("pole_order_m", a, order=m), el("pole", b)))
    if norm is SIG:
        ref = oracle.sigma_ip_quadrature(lambda z: (z - a) ** -m, lambda z: 1 / (z - b), 1024)
    else:
        ref = oracle.dirichlet_ip_quadrature(lambda z: -m * (z - a) ** (-m - 1),
                                             lambda z: -1 / (z - b) ** 2, EXT, 96, 1024)
    assert got == pytest.approx(ref, rel=1e-10)


def test_higher_pole_moment_against_quadrature():
    f = builtin_target("f2")
    a = 0.3 - 0.35j
    got = c(moment_entry(DIR, EXT, el("pole_order_m", a, order=3), f))
    ref = oracle.dirichlet_ip_quadrature(
        lambda z: -3 * (z - a) ** -4, lambda z: complex(1) * f.derivative(z), EXT, 96, 1024)
    assert got == pytest.approx(ref, rel=1e-10)


# --- reduced-grid oracle property --------------------------------------------

points = st.tuples(st.floats(0.1, 0.85), st.floats(0, 2 * math.pi)).map(
    lambda rt: complex(rt[0] * math.cos(rt[1]), rt[0] * math.sin(rt[1])))


@settings(max_examples=25, deadline=None)
@given(points, points)
def test_log_paired_against_quadrature(a, ap):
    if abs(a - ap) < 1e-3:
        return
    b = el("log_paired", a, paired=ap)
    got = c(gram_entry(DIR, EXT, b, b))

    def d(z):
        return 1 / (z - ap) - 1 / (z - a)

    ref = oracle.dirichlet_ip_quadrature(d, d, EXT, 64, 512)
    assert got == pytest.approx(ref, rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(points, points)
def test_hermitian_symmetry(a, b):
    for kind in ("pole", "log_origin"):
        x = gram_entry(DIR, EXT, el(kind, a), el("pole", b))
        y = gram_entry(DIR, EXT, el("pole", b), el(kind, a))
        assert float((x - y.conj()).abs2().hi) <= 1e-56


# --- involution points --------------------------------------------------------

def test_involution_round_trip():
    ip = involution_point(0.3 - 0.45j)
    back = ip.back()
    assert float((back - XComplex.from_complex(0.3 - 0.45j)).abs2().hi) < 1e-56
    assert abs(complex(ip.p_conj)) > 1
    assert abs(complex(involution_point(2 + 1j).p_conj)) < 1


def test_involution_of_origin():
    with pytest.raises(DomainError):
        involution_point(0)


# --- Cauchy determinant --------------------------------------------------------

def test_cauchy_single():
    assert c(cauchy_determinant([0.5])) == pytest.approx(4 / 3, rel=1e-30)


def test_cauchy_pair_matches_cofactor():
    zs = [0.5, -0.5]
    T = gram_matrix(SIG, [el("pole", z) for z in zs]).to_complex()
    det = T[0, 0] * T[1, 1] - T[0, 1] * T[1, 0]
    assert c(cauchy_determinant(zs)) == pytest.approx(det, rel=1e-15)


def test_cauchy_case5():
    zs = [b.location for b in ring_sources("0.5", 16)]
    assert abs(c(cauchy_determinant(zs))) == pytest.approx(0.10440487e-52, rel=1e-7)


def test_cauchy_errors():
    with pytest.raises(DomainError):
        cauchy_determinant([0.5, 0.5])
    with pytest.raises(DomainError):
        cauchy_determinant([0.0, 0.5])


# --- assembled matrices ---------------------------------------------------------

def test_gram_matrix_matches_entries():
    basis = [el("pole", 0.5), el("log_origin", 0.3j), el("log_paired", -0.2, paired=0.1 + 0.1j),
             el("pole_order_m", 0.2 - 0.2j, order=2), el("inverse_z")]
    T = gram_matrix(DIR, basis).to_complex()
    for i, b in enumerate(basis):
        for j, d in enumerate(basis):
            assert T[i, j] == pytest.approx(c(gram_entry(DIR, EXT, b, d)), rel=1e-15, abs=1e-300)


def test_moment_vector_matches_entries():
    f = builtin_target("f1")
    basis = ring_sources("0.5", 4) + [el("inverse_z")]
    A = moment_vector(SIG, basis, f).to_complex()
    for k, b in enumerate(basis):
        assert A[k] == pytest.approx(c(moment_entry(SIG, EXT, b, f)), rel=1e-15)


def test_real_target_moment():
    # E real log moment is F(P_k) / 2 at the involution point P_k = X_k / |X_k|^2
    f = TargetFunction("pole", lambda z: 1 / (z - 0.2), real=True)
    xk = 0.5 + 0.25j
    got = c(moment_entry(NormKind.ENERGY_REAL, EXT, el("real_log", xk), f))
    P = xk / abs(xk) ** 2
    assert got == pytest.approx(0.5 * (1 / (P - 0.2)).real, rel=1e-15)
