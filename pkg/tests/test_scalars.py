"""Double-double and jet arithmetic, checked against mpmath at 50 digits."""

from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diskfit import scalars
from diskfit.errors import ContractError, DomainError
from diskfit.scalars import Jet, XComplex, XReal, complex_ln_principal, jet_compose, xsum

mp.mp.dps = 50

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False).filter(lambda x: abs(x) > 1e-6)


def mpf(x):
    """Exact mpmath value of a 0-d XReal."""
    return mp.mpf(float(x.hi)) + mp.mpf(float(x.lo))


def rel(a, b):
    return abs(a - b) / abs(b) if b != 0 else abs(a)


def xr(text):
    return XReal.from_string(text)


# --- basic arithmetic ------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(finite, finite)
def test_add_sub_round_trip(a, b):
    x, y = XReal(a), XReal(b)
    back = (x + y) - y
    assert rel(mpf(back), mp.mpf(a)) < 1e-28 or abs(mpf(back) - a) < 1e-28 * abs(b)


@settings(max_examples=100, deadline=None)
@given(finite, finite)
def test_mul_div_match_mpmath(a, b):
    x, y = XReal(a) / 3.0, XReal(b) / 7.0
    ref_x, ref_y = mp.mpf(a) / 3, mp.mpf(b) / 7
    assert rel(mpf(x * y), ref_x * ref_y) < 1e-30
    assert rel(mpf(x / y), ref_x / ref_y) < 1e-30


def test_from_string_is_exact_to_double_double():
    x = xr("0.1")
    assert abs(mpf(x) - mp.mpf("0.1")) < mp.mpf(2) ** -105
    assert x.to_fraction() != Fraction(1, 10)
    assert abs(x.to_fraction() - Fraction(1, 10)) < Fraction(1, 10 ** 32)


def test_sum_of_inverse_squares():
    n = np.arange(1, 10001, dtype=float)
    terms = XReal(1.0) / (XReal(n) * XReal(n))
    total = xsum(terms)
    ref = mp.nsum(lambda k: 1 / k ** 2, [1, 10000])
    assert rel(mpf(total), ref) < 1e-25


def test_deterministic():
    a = XReal(np.linspace(0.1, 3, 7)) / 3.0
    r1 = scalars.exp(a) * scalars.sin(a)
    r2 = scalars.exp(a) * scalars.sin(a)
    assert np.array_equal(r1.hi, r2.hi) and np.array_equal(r1.lo, r2.lo)


# --- transcendental functions ---------------------------------------------

POINTS = ["0.3", "1.7", "-2.25", "10.5", "0.001", "-0.75"]


@pytest.mark.parametrize("text", POINTS)
@pytest.mark.parametrize("name", ["exp", "expm1", "sin", "cos"])
def test_real_functions(name, text):
    x = xr(text)
    got = mpf(getattr(scalars, name)(x))
    ref = getattr(mp, name)(mpf(x))
    assert rel(got, ref) < 1e-30


@pytest.mark.parametrize("text", ["0.3", "1.7", "2.25", "1e5", "1e-4"])
def test_log_and_sqrt(text):
    x = xr(text)
    assert rel(mpf(scalars.log(x)), mp.log(mpf(x))) < 1e-30
    assert rel(mpf(scalars.sqrt(x)), mp.sqrt(mpf(x))) < 1e-30


@pytest.mark.parametrize("text", ["1e-8", "-0.3", "0.5", "3"])
def test_log1p(text):
    x = xr(text)
    assert rel(mpf(scalars.log1p(x)), mp.log1p(mpf(x))) < 1e-30


def test_sin_large_argument_reduction():
    x = xr("100.25")
    assert rel(mpf(scalars.sin(x)), mp.sin(mpf(x))) < 1e-29


@pytest.mark.parametrize("y,x", [(1, 1), (-1, 1), (1, -1), (-1, -1), (0.3, -2)])
def test_atan2_quadrants(y, x):
    got = mpf(scalars.atan2(XReal(y), XReal(x)))
    assert rel(got, mp.atan2(y, x)) < 1e-30


def test_complex_functions():
    z = XComplex(xr("0.4"), xr("-1.3"))
    zm = mp.mpc(mpf(z.re), mpf(z.im))
    for name in ("exp", "log", "sin", "cos", "sqrt"):
        w = getattr(scalars, name)(z)
        got = mp.mpc(mpf(w.re), mpf(w.im))
        assert abs(got - getattr(mp, name)(zm)) < 1e-30 * abs(getattr(mp, name)(zm))


def test_complex_log1p_near_zero():
    z = XComplex(xr("1e-9"), xr("2e-9"))
    w = scalars.log1p(z)
    zm = mp.mpc(mpf(z.re), mpf(z.im))
    got = mp.mpc(mpf(w.re), mpf(w.im))
    assert abs(got - mp.log1p(zm)) < 1e-30 * abs(zm)


# --- principal logarithm (spec examples) -----------------------------------

def test_ln_one():
    w = complex_ln_principal(XComplex(1.0, 0.0))
    assert w.to_complex() == 0


def test_ln_minus_one_is_i_pi():
    for im in (0.0, -0.0):
        w = complex_ln_principal(XComplex(XReal(-1.0), XReal(im)))
        assert float(w.re.hi) == 0
        assert mpf(w.im) == mpf(scalars.PI)
        assert abs(mpf(w.im) - mp.pi) < 1e-31


def test_ln_one_plus_i():
    w = complex_ln_principal(XComplex(1.0, 1.0))
    assert abs(mpf(w.re) - mp.log(2) / 2) < 1e-31
    assert abs(mpf(w.im) - mp.pi / 4) < 1e-31
    assert abs(w.to_complex() - (0.3465735903 + 0.7853981634j)) < 1e-10


def test_ln_zero_is_domain_error():
    with pytest.raises(DomainError):
        complex_ln_principal(XComplex(0.0, 0.0))


# --- XComplex invariants ---------------------------------------------------

@settings(max_examples=50, deadline=None)
@given(finite, finite)
def test_conj_involution_and_abs2(a, b):
    z = XComplex(XReal(a) / 3, XReal(b) / 7)
    zz = z.conj().conj()
    assert np.array_equal(zz.re.hi, z.re.hi) and np.array_equal(zz.im.lo, z.im.lo)
    assert float(z.abs2().hi) >= 0


def test_complex_division_matches_mpmath():
    a = XComplex(xr("0.3"), xr("1.1"))
    b = XComplex(xr("-2.5"), xr("0.7"))
    q = a / b
    ref = mp.mpc(mpf(a.re), mpf(a.im)) / mp.mpc(mpf(b.re), mpf(b.im))
    assert abs(mp.mpc(mpf(q.re), mpf(q.im)) - ref) < 1e-31


# --- jets ------------------------------------------------------------------

def test_jet_compose_identity():
    g = Jet([2.0, 3.0, -1.0])
    ident = Jet([g.value, 1.0, 0.0])
    out = jet_compose(ident, g)
    assert [complex(c) for c in out.coeffs] == [2.0, 3.0, -1.0]


def test_jet_compose_square():
    a = 1.5
    out = jet_compose(Jet([a * a, 2 * a]), Jet([a, 1.0]))
    assert [float(c) for c in out.coeffs] == [a * a, 2 * a]


def test_jet_compose_reciprocal():
    # derivatives of 1/x at x = 2: 1/2, -1/4, 2/8
    f = Jet([0.5, -0.25, 0.25])
    out = jet_compose(f, Jet([2.0, 1.0, 0.0]))
    assert [float(c) for c in out.coeffs] == [0.5, -0.25, 0.25]
    assert [float(c) for c in (1 / Jet.variable(2.0, 2)).coeffs] == [0.5, -0.25, 0.25]


def test_jet_compose_order_mismatch():
    with pytest.raises(ContractError):
        jet_compose(Jet([1.0, 2.0]), Jet([1.0, 1.0, 0.0]))


def test_jet_order_limit():
    with pytest.raises(ContractError):
        Jet.variable(1.0, scalars.MAX_JET_ORDER + 1)


def test_leibniz_rule():
    f = Jet([1.0, 2.0, 3.0, 4.0])
    g = Jet([5.0, -1.0, 0.5, 2.0])
    h = f * g
    assert float(h.coeffs[1]) == 1.0 * -1.0 + 2.0 * 5.0
    assert float(h.coeffs[2]) == 1.0 * 0.5 + 2 * 2.0 * -1.0 + 3.0 * 5.0


def test_order_zero_jet_equals_plain_arithmetic():
    a = XComplex(xr("0.3"), xr("0.2"))
    b = XComplex(xr("1.3"), xr("-0.4"))
    via_jet = (Jet([a]) * Jet([b]) + Jet([a])).coeffs[0]
    direct = a * b + a
    assert np.array_equal(via_jet.re.hi, direct.re.hi)
    assert np.array_equal(via_jet.im.lo, direct.im.lo)


@pytest.mark.parametrize("name", ["exp", "log", "sin", "cos", "sqrt"])
def test_jet_derivatives_match_finite_differences(name):
    func = getattr(scalars, name)
    x0 = 0.7 + 0.2j
    h = 1e-5
    jet = func(Jet.variable(XComplex.from_complex(x0), 2))
    d1 = complex(jet.coeffs[1])
    d2 = complex(jet.coeffs[2])

    def f(x):
        return func(XComplex.from_complex(x)).to_complex()

    fd1 = (f(x0 + h) - f(x0 - h)) / (2 * h)
    fd2 = (f(x0 + h) - 2 * f(x0) + f(x0 - h)) / h ** 2
    assert abs(d1 - fd1) < 1e-6 * abs(d1)
    assert abs(d2 - fd2) < 1e-4 * max(abs(d2), 1)


def test_jet_high_order_against_mpmath():
    x0 = mp.mpf("0.45")
    jet = 1 / (1 - Jet.variable(xr("0.45"), 4)) ** 2
    for n in range(5):
        ref = mp.diff(lambda t: 1 / (1 - t) ** 2, x0, n)
        assert rel(mpf(jet.coeffs[n]), ref) < 1e-29
