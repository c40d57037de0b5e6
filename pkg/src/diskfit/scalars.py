"""Double-double real/complex arithmetic and truncated Taylor jets.

``XReal`` stores a value as an unevaluated sum ``hi + lo`` of two float64
arrays with ``|lo| <= ulp(hi)/2``, giving roughly 32 significant decimal
digits.  Every operation is vectorised over numpy arrays of any shape (0-d
included), so the same type serves for scalars, vectors and matrices.

``XComplex`` pairs two ``XReal`` arrays.  ``Jet`` carries a value together
with its first few derivatives and works over any coefficient type that
supports ``+ - * /`` (plain numbers, ``XComplex`` or nested ``Jet``), which is
how mixed partial derivatives of closed-form kernels are obtained.

The elementary functions ``exp``, ``expm1``, ``log``, ``log1p``, ``sin``,
``cos`` and ``sqrt`` dispatch on argument type; plain numbers and numpy
arrays fall through to numpy.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import singledispatch

import numpy as np

from diskfit.errors import ContractError, DomainError

__all__ = [
    "XReal",
    "XComplex",
    "Jet",
    "jet_compose",
    "complex_ln_principal",
    "exp",
    "expm1",
    "log",
    "log1p",
    "sin",
    "cos",
    "sqrt",
    "atan2",
    "as_xcomplex",
    "xsum",
    "MAX_JET_ORDER",
]

MAX_JET_ORDER = 4

_SPLITTER = 134217729.0  # 2**27 + 1


# ---------------------------------------------------------------------------
# error-free transformations (elementwise on float64 arrays)
# ---------------------------------------------------------------------------

def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(ah, al, bh, bl):
    s, e = _two_sum(ah, bh)
    t, f = _two_sum(al, bl)
    e = e + t
    s, e = _quick_two_sum(s, e)
    e = e + f
    return _quick_two_sum(s, e)


def _dd_mul(ah, al, bh, bl):
    p, e = _two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return _quick_two_sum(p, e)


def _finite_fix(hi, lo):
    # inf/nan in hi poisons lo through the error terms; keep lo clean
    bad = ~np.isfinite(hi)
    if np.any(bad):
        lo = np.where(bad, 0.0, lo)
    return hi, lo


def _real_parts(x):
    """(hi, lo) float arrays for an XReal or a real number/array."""
    if isinstance(x, XReal):
        return x.hi, x.lo
    a = np.asarray(x, dtype=float)
    return a, np.zeros_like(a)


def _is_plain_real(x):
    if isinstance(x, (bool, int, float, np.integer, np.floating)):
        return True
    return isinstance(x, np.ndarray) and x.dtype.kind in "biuf"


def _is_plain_complex(x):
    if isinstance(x, (complex, np.complexfloating)):
        return True
    return isinstance(x, np.ndarray) and x.dtype.kind == "c"


# ---------------------------------------------------------------------------
# XReal
# ---------------------------------------------------------------------------

class XReal:
    """Double-double real array."""

    __slots__ = ("hi", "lo")
    __array_ufunc__ = None  # make numpy defer to our reflected operators

    def __init__(self, hi, lo=None):
        hi = np.asarray(hi, dtype=float)
        if lo is None:
            lo = np.zeros_like(hi)
        else:
            lo = np.asarray(lo, dtype=float)
            if lo.shape != hi.shape:
                hi, lo = np.broadcast_arrays(hi, lo)
                hi, lo = hi.copy(), lo.copy()
        self.hi = hi
        self.lo = lo

    # -- construction -------------------------------------------------------
    @classmethod
    def zeros(cls, shape):
        return cls(np.zeros(shape), np.zeros(shape))

    @classmethod
    def from_fraction(cls, value):
        """Round an exact rational (or int/str) to the nearest double-double."""
        fr = Fraction(value)
        hi = float(fr)
        lo = float(fr - Fraction(hi))
        return cls(hi, lo)

    @classmethod
    def from_string(cls, text):
        return cls.from_fraction(Fraction(text))

    def to_fraction(self):
        """Exact rational value of a 0-d XReal."""
        return Fraction(float(self.hi)) + Fraction(float(self.lo))

    # -- array protocol -----------------------------------------------------
    @property
    def shape(self):
        return self.hi.shape

    @property
    def ndim(self):
        return self.hi.ndim

    @property
    def size(self):
        return self.hi.size

    def __len__(self):
        return len(self.hi)

    def __getitem__(self, idx):
        return XReal(self.hi[idx], self.lo[idx])

    def __setitem__(self, idx, value):
        h, l = _real_parts(value)
        self.hi[idx] = h
        self.lo[idx] = l

    def copy(self):
        return XReal(self.hi.copy(), self.lo.copy())

    def reshape(self, *shape):
        return XReal(self.hi.reshape(*shape), self.lo.reshape(*shape))

    def transpose(self, *axes):
        return XReal(self.hi.transpose(*axes), self.lo.transpose(*axes))

    @property
    def T(self):
        return self.transpose()

    def broadcast_to(self, shape):
        return XReal(np.broadcast_to(self.hi, shape).copy(),
                     np.broadcast_to(self.lo, shape).copy())

    def scale2(self, k):
        """Exact multiplication by 2**k."""
        return XReal(np.ldexp(self.hi, k), np.ldexp(self.lo, k))

    # -- conversion ---------------------------------------------------------
    def __float__(self):
        return float(self.hi)

    def to_float(self):
        return self.hi + self.lo

    def __repr__(self):
        if self.ndim == 0:
            return f"XReal({float(self.hi)!r}, {float(self.lo)!r})"
        return f"XReal(shape={self.shape})"

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, XReal):
            return other.hi, other.lo
        if _is_plain_real(other):
            return _real_parts(other)
        return None

    def __neg__(self):
        return XReal(-self.hi, -self.lo)

    def __pos__(self):
        return self

    def __abs__(self):
        neg = self.hi < 0
        return XReal(np.where(neg, -self.hi, self.hi), np.where(neg, -self.lo, self.lo))

    def __add__(self, other):
        b = self._coerce(other)
        if b is None:
            if _is_plain_complex(other):
                return XComplex(self) + other
            return NotImplemented
        with np.errstate(invalid="ignore", over="ignore"):
            return XReal(*_finite_fix(*_dd_add(self.hi, self.lo, *b)))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is None:
            if _is_plain_complex(other):
                return XComplex(self) - other
            return NotImplemented
        with np.errstate(invalid="ignore", over="ignore"):
            return XReal(*_finite_fix(*_dd_add(self.hi, self.lo, -b[0], -b[1])))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        b = self._coerce(other)
        if b is None:
            if _is_plain_complex(other):
                return XComplex(self) * other
            return NotImplemented
        with np.errstate(invalid="ignore", over="ignore"):
            return XReal(*_finite_fix(*_dd_mul(self.hi, self.lo, *b)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is None:
            if _is_plain_complex(other):
                return XComplex(self) / other
            return NotImplemented
        return _dd_div(self, XReal(*b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is None:
            if _is_plain_complex(other):
                return XComplex(other) / XComplex(self)
            return NotImplemented
        return _dd_div(XReal(*b), self)

    def __pow__(self, n):
        return _int_power(self, n)

    # -- comparisons (elementwise, on the exact value) ----------------------
    def _cmp(self, other):
        d = self - other
        return d.hi

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return (self.hi == b[0]) & (self.lo == b[1])

    def __ne__(self, other):
        eq = self.__eq__(other)
        if eq is NotImplemented:
            return eq
        return ~eq

    __hash__ = None


def _dd_div(a, b):
    with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
        q1 = a.hi / b.hi
        r = a - b * q1
        q2 = r.hi / b.hi
        r = r - b * q2
        q3 = r.hi / b.hi
        q1, q2 = _quick_two_sum(q1, q2)
        h, l = _dd_add(q1, q2, q3, np.zeros_like(q3))
        return XReal(*_finite_fix(h, l))


def _int_power(x, n):
    if not isinstance(n, (int, np.integer)):
        return NotImplemented
    n = int(n)
    if n < 0:
        return 1 / _int_power(x, -n)
    result = None
    base = x
    while n:
        if n & 1:
            result = base if result is None else result * base
        n >>= 1
        if n:
            base = base * base
    if result is None:
        return x * 0 + 1
    return result


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

PI = XReal(3.141592653589793116e+00, 1.224646799147353207e-16)
LN2 = XReal(6.931471805599452862e-01, 2.319046813846299558e-17)
_PIO2 = (1.570796326794896558e+00, 6.123233995736766036e-17, -1.497384904859169777e-33)
_INV_FACT = [XReal.from_fraction(Fraction(1, math.factorial(n))) for n in range(34)]


# ---------------------------------------------------------------------------
# XComplex
# ---------------------------------------------------------------------------

class XComplex:
    """Double-double complex array with real and imaginary ``XReal`` parts."""

    __slots__ = ("re", "im")
    __array_ufunc__ = None

    def __init__(self, re, im=None):
        if isinstance(re, XComplex) and im is None:
            self.re, self.im = re.re, re.im
            return
        if im is None and _is_plain_complex(re):
            arr = np.asarray(re, dtype=complex)
            self.re = XReal(arr.real.copy())
            self.im = XReal(arr.imag.copy())
            return
        self.re = re if isinstance(re, XReal) else XReal(re)
        if im is None:
            im = XReal.zeros(self.re.shape)
        self.im = im if isinstance(im, XReal) else XReal(im)
        if self.im.shape != self.re.shape:
            shape = np.broadcast_shapes(self.re.shape, self.im.shape)
            self.re = self.re.broadcast_to(shape)
            self.im = self.im.broadcast_to(shape)

    @classmethod
    def zeros(cls, shape):
        return cls(XReal.zeros(shape), XReal.zeros(shape))

    @classmethod
    def from_complex(cls, value):
        return cls(np.asarray(value, dtype=complex))

    # -- array protocol -----------------------------------------------------
    @property
    def shape(self):
        return self.re.shape

    @property
    def ndim(self):
        return self.re.ndim

    @property
    def size(self):
        return self.re.size

    def __len__(self):
        return len(self.re)

    def __getitem__(self, idx):
        return XComplex(self.re[idx], self.im[idx])

    def __setitem__(self, idx, value):
        v = as_xcomplex(value)
        self.re[idx] = v.re
        self.im[idx] = v.im

    def copy(self):
        return XComplex(self.re.copy(), self.im.copy())

    def reshape(self, *shape):
        return XComplex(self.re.reshape(*shape), self.im.reshape(*shape))

    def transpose(self, *axes):
        return XComplex(self.re.transpose(*axes), self.im.transpose(*axes))

    @property
    def T(self):
        return self.transpose()

    def broadcast_to(self, shape):
        return XComplex(self.re.broadcast_to(shape), self.im.broadcast_to(shape))

    # -- conversion ---------------------------------------------------------
    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def to_complex(self):
        """Nearest complex128 array."""
        return self.re.to_float() + 1j * self.im.to_float()

    def __complex__(self):
        return complex(float(self.re.hi), float(self.im.hi))

    def __repr__(self):
        if self.ndim == 0:
            return f"XComplex({complex(self)!r})"
        return f"XComplex(shape={self.shape})"

    # -- arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, XComplex):
            return other
        if isinstance(other, XReal) or _is_plain_real(other) or _is_plain_complex(other):
            return as_xcomplex(other)
        return None

    def conj(self):
        return XComplex(self.re, -self.im)

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        return sqrt(self.abs2())

    def __neg__(self):
        return XComplex(-self.re, -self.im)

    def __pos__(self):
        return self

    def __add__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return XComplex(self.re + b.re, self.im + b.im)

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return XComplex(self.re - b.re, self.im - b.im)

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return XComplex(b.re - self.re, b.im - self.im)

    def __mul__(self, other):
        if isinstance(other, XReal) or _is_plain_real(other):
            return XComplex(self.re * other, self.im * other)
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return XComplex(self.re * b.re - self.im * b.im, self.re * b.im + self.im * b.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, XReal) or _is_plain_real(other):
            return XComplex(self.re / other, self.im / other)
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        den = b.abs2()
        return XComplex((self.re * b.re + self.im * b.im) / den,
                        (self.im * b.re - self.re * b.im) / den)

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return b / self

    def __pow__(self, n):
        return _int_power(self, n)

    def __eq__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return (self.re == b.re) & (self.im == b.im)

    __hash__ = None


def as_xcomplex(x):
    """Promote a number, numpy array, ``XReal`` or ``XComplex`` to ``XComplex``."""
    if isinstance(x, XComplex):
        return x
    if isinstance(x, XReal):
        return XComplex(x, XReal.zeros(x.shape))
    if _is_plain_complex(x):
        return XComplex(x)
    if _is_plain_real(x):
        return XComplex(XReal(x))
    raise TypeError(f"cannot convert {type(x).__name__} to XComplex")


def xsum(x, axis=0):
    """Sum an XReal/XComplex array along ``axis`` in fixed sequential order."""
    n = x.shape[axis]
    moved = _moveaxis(x, axis)
    if n == 0:
        return type(x).zeros(moved.shape[1:])
    acc = moved[0]
    for i in range(1, n):
        acc = acc + moved[i]
    return acc


def _moveaxis(x, axis):
    if isinstance(x, XComplex):
        return XComplex(_moveaxis(x.re, axis), _moveaxis(x.im, axis))
    return XReal(np.moveaxis(x.hi, axis, 0), np.moveaxis(x.lo, axis, 0))


# ---------------------------------------------------------------------------
# real elementary functions
# ---------------------------------------------------------------------------

def _exp_reduced(x):
    """Return (k, s) with exp(x) = 2**k * (1 + s)."""
    with np.errstate(invalid="ignore", over="ignore"):
        k = np.rint(x.hi / LN2.hi)
        k = np.where(np.isfinite(k), k, 0.0)
        r = x - LN2 * k
        r = r.scale2(-10)
        p = _INV_FACT[12]
        for n in range(11, 0, -1):
            p = p * r + _INV_FACT[n]
        s = p * r
        for _ in range(10):
            s = s * (s + 2.0)
    return k, s


def _xreal_exp(x):
    k, s = _exp_reduced(x)
    one_s = s + 1.0
    ki = k.astype(np.int64)
    hi = np.ldexp(one_s.hi, ki)
    lo = np.ldexp(one_s.lo, ki)
    hi = np.where(x.hi > 709.78, np.inf, hi)
    hi = np.where(x.hi < -745.2, 0.0, hi)
    lo = np.where((x.hi > 709.78) | (x.hi < -745.2), 0.0, lo)
    return XReal(hi, lo)


def _xreal_expm1(x):
    k, s = _exp_reduced(x)
    full = _xreal_exp(x) - 1.0
    small = k == 0
    return XReal(np.where(small, s.hi, full.hi), np.where(small, s.lo, full.lo))


def _xreal_log(x):
    with np.errstate(invalid="ignore", divide="ignore"):
        y0 = np.log(x.hi)
        finite = np.isfinite(y0)
        y0s = np.where(finite, y0, 0.0)
        y = XReal(y0s) + (x * _xreal_exp(XReal(-y0s)) - 1.0)
    return XReal(np.where(finite, y.hi, y0), np.where(finite, y.lo, 0.0))


def _xreal_log1p(u):
    with np.errstate(invalid="ignore", divide="ignore"):
        y0 = np.log1p(u.hi)
        finite = np.isfinite(y0)
        y0s = np.where(finite, y0, 0.0)
        e = _xreal_expm1(XReal(y0s))
        y = XReal(y0s) - (e - u) / (e + 1.0)
    return XReal(np.where(finite, y.hi, y0), np.where(finite, y.lo, 0.0))


def _xreal_sqrt(x):
    with np.errstate(invalid="ignore", divide="ignore"):
        y0 = np.sqrt(x.hi)
        p, e = _two_prod(y0, y0)
        resid = x - XReal(p, e)
        safe = np.where(y0 > 0, y0, 1.0)
        corr = resid.hi * (0.5 / safe)
        h, l = _quick_two_sum(y0, corr)
    zero = x.hi == 0
    return XReal(np.where(zero, 0.0, h), np.where(zero, 0.0, l))


def _sin_cos_reduced(r):
    r2 = r * r
    # Horner in r^2 with alternating signs; 16 terms reach 1e-33 on |r| <= pi/4
    s = _INV_FACT[31] * (-1.0)
    for j in range(14, -1, -1):
        s = s * r2 + _INV_FACT[2 * j + 1] * (-1.0 if j % 2 else 1.0)
    c = _INV_FACT[30] * 1.0
    for j in range(14, -1, -1):
        c = c * r2 + _INV_FACT[2 * j] * (-1.0 if j % 2 else 1.0)
    return s * r, c


def _xreal_sin_cos(x):
    with np.errstate(invalid="ignore"):
        k = np.rint(x.hi / _PIO2[0])
        k = np.where(np.isfinite(k), k, 0.0)
        r = x - XReal(*_two_prod(k, _PIO2[0]))
        r = r - XReal(*_two_prod(k, _PIO2[1]))
        r = r - XReal(k * _PIO2[2])
    s, c = _sin_cos_reduced(r)
    q = np.mod(k, 4).astype(np.int64)
    ns, nc = -s, -c
    sin_x = _select(q, [s, c, ns, nc])
    cos_x = _select(q, [c, ns, nc, s])
    return sin_x, cos_x


def _select(q, options):
    hi = np.choose(q, [o.hi for o in options])
    lo = np.choose(q, [o.lo for o in options])
    return XReal(hi, lo)


def atan2(y, x):
    """Four-quadrant arctangent of double-double arrays, in [-pi, pi]."""
    y = y if isinstance(y, XReal) else XReal(y)
    x = x if isinstance(x, XReal) else XReal(x)
    theta0 = np.arctan2(y.hi, x.hi)
    s0, c0 = _xreal_sin_cos(XReal(theta0))
    num = y * c0 - x * s0
    den = x * c0 + y * s0
    with np.errstate(invalid="ignore", divide="ignore"):
        delta = num / den
    ok = np.isfinite(delta.hi) & (den.hi != 0)
    dh = np.where(ok, delta.hi, 0.0)
    dl = np.where(ok, delta.lo, 0.0)
    return XReal(theta0) + XReal(dh, dl)


def _sinh_cosh(x):
    em = _xreal_expm1(x)
    emn = _xreal_expm1(-x)
    return (em - emn) * 0.5, (em + emn) * 0.5 + 1.0


# ---------------------------------------------------------------------------
# complex elementary functions
# ---------------------------------------------------------------------------

def _xcomplex_exp(z):
    e = _xreal_exp(z.re)
    s, c = _xreal_sin_cos(z.im)
    return XComplex(e * c, e * s)


def _xcomplex_log(z):
    r2 = z.abs2()
    near = (r2.hi > 0.5) & (r2.hi < 2.0)
    u = (z.re - 1.0) * (z.re + 1.0) + z.im * z.im
    a = _xreal_log1p(u) * 0.5
    b = _xreal_log(r2) * 0.5
    re = XReal(np.where(near, a.hi, b.hi), np.where(near, a.lo, b.lo))
    return XComplex(re, atan2(z.im, z.re))


def _xcomplex_log1p(u):
    t = u.re * 2.0 + u.abs2()
    re = _xreal_log1p(t) * 0.5
    return XComplex(re, atan2(u.im, u.re + 1.0))


def _xcomplex_sin(z):
    s, c = _xreal_sin_cos(z.re)
    sh, ch = _sinh_cosh(z.im)
    return XComplex(s * ch, c * sh)


def _xcomplex_cos(z):
    s, c = _xreal_sin_cos(z.re)
    sh, ch = _sinh_cosh(z.im)
    return XComplex(c * ch, -(s * sh))


def _xcomplex_sqrt(z):
    # principal branch: sqrt(|z|) * exp(i arg/2) via half-angle formulas
    r = abs(z)
    a = sqrt((r + z.re) * 0.5)
    b = sqrt((r - z.re) * 0.5)
    sign = np.where(z.im.hi < 0, -1.0, 1.0)
    return XComplex(a, b * sign)


@singledispatch
def exp(x):
    return np.exp(x)


@singledispatch
def expm1(x):
    return np.expm1(x)


@singledispatch
def log(x):
    return np.log(x)


@singledispatch
def log1p(x):
    return np.log1p(x)


@singledispatch
def sin(x):
    return np.sin(x)


@singledispatch
def cos(x):
    return np.cos(x)


@singledispatch
def sqrt(x):
    return np.sqrt(x)


exp.register(XReal, _xreal_exp)
exp.register(XComplex, _xcomplex_exp)
expm1.register(XReal, _xreal_expm1)
expm1.register(XComplex, lambda z: _xcomplex_exp(z) - 1.0)
log.register(XReal, _xreal_log)
log.register(XComplex, _xcomplex_log)
log1p.register(XReal, _xreal_log1p)
log1p.register(XComplex, _xcomplex_log1p)
sin.register(XReal, lambda x: _xreal_sin_cos(x)[0])
sin.register(XComplex, _xcomplex_sin)
cos.register(XReal, lambda x: _xreal_sin_cos(x)[1])
cos.register(XComplex, _xcomplex_cos)
sqrt.register(XReal, _xreal_sqrt)
sqrt.register(XComplex, _xcomplex_sqrt)


def complex_ln_principal(z):
    """Principal logarithm ``ln|z| + i arg z`` with ``arg`` in ``(-pi, pi]``.

    Raises
    ------
    DomainError
        If any element of ``z`` is zero.
    """
    z = as_xcomplex(z)
    if np.any((z.re.hi == 0) & (z.im.hi == 0)):
        raise DomainError("logarithm of zero")
    w = _xcomplex_log(z)
    # arg = -pi only arises from a negative-zero imaginary part
    at_minus_pi = (w.im.hi == -PI.hi) & (w.im.lo == -PI.lo)
    if np.any(at_minus_pi):
        w.im.hi[...] = np.where(at_minus_pi, PI.hi, w.im.hi)
        w.im.lo[...] = np.where(at_minus_pi, PI.lo, w.im.lo)
    return w


# ---------------------------------------------------------------------------
# jets
# ---------------------------------------------------------------------------

def _is_zero(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and x == 0


def _add_terms(a, b):
    if _is_zero(a):
        return b
    if _is_zero(b):
        return a
    return a + b


def _mul_terms(a, b):
    if _is_zero(a) or _is_zero(b):
        return 0
    return a * b


def _scale(a, k):
    if _is_zero(a):
        return 0
    if k == 1:
        return a
    return a * k


def _div_int(a, k):
    if _is_zero(a):
        return 0
    if k == 1:
        return a
    return a / k


class Jet:
    """Truncated Taylor jet: ``coeffs[n]`` is the n-th derivative at a point.

    Coefficients may be numbers, numpy arrays, ``XComplex`` arrays or jets
    themselves (nesting yields mixed partials).  Exact zeros are kept as the
    integer ``0`` so constants cost nothing to propagate.
    """

    __slots__ = ("coeffs",)
    __array_ufunc__ = None

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        if not 1 <= len(coeffs) <= MAX_JET_ORDER + 1:
            raise ContractError(
                f"jet order must be between 0 and {MAX_JET_ORDER}, got {len(coeffs) - 1}")
        self.coeffs = coeffs

    @classmethod
    def variable(cls, x, order):
        return cls([x, 1] + [0] * (order - 1)) if order > 0 else cls([x])

    @classmethod
    def constant(cls, x, order):
        return cls([x] + [0] * order)

    @property
    def order(self):
        return len(self.coeffs) - 1

    @property
    def value(self):
        return self.coeffs[0]

    def derivative(self, n):
        return self.coeffs[n]

    def taylor(self):
        """Normalised Taylor coefficients ``f^(n)/n!``."""
        return [_div_int(c, math.factorial(n)) for n, c in enumerate(self.coeffs)]

    @classmethod
    def from_taylor(cls, t):
        return cls([_scale(c, math.factorial(n)) for n, c in enumerate(t)])

    def __repr__(self):
        return f"Jet({self.coeffs!r})"

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.order != self.order:
                raise ContractError(
                    f"jet order mismatch: {self.order} vs {other.order}")
            return other
        return Jet.constant(other, self.order)

    def __neg__(self):
        return Jet([_scale(c, -1) for c in self.coeffs])

    def __pos__(self):
        return self

    def __add__(self, other):
        o = self._coerce(other)
        return Jet([_add_terms(a, b) for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return Jet([_add_terms(a, _scale(b, -1)) for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet([_mul_terms(c, other) for c in self.coeffs])
        o = self._coerce(other)
        out = []
        for n in range(self.order + 1):
            acc = 0
            for k in range(n + 1):
                term = _mul_terms(self.coeffs[k], o.coeffs[n - k])
                acc = _add_terms(acc, _scale(term, math.comb(n, k)))
            out.append(acc)
        return Jet(out)

    __rmul__ = __mul__

    def reciprocal(self):
        v = self.value
        r = 1 / v
        derivs = [r]
        p = r
        for k in range(1, self.order + 1):
            p = p * r
            derivs.append(_scale(p, (-1) ** k * math.factorial(k)))
        return jet_compose(Jet(derivs), self)

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet([_div_int(c, other) for c in self.coeffs])
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        return _int_power(self, n)


def jet_compose(f_taylor, g):
    """Compose ``f`` with ``g``.

    ``f_taylor`` holds the derivatives of ``f`` evaluated at ``g.value``;
    the result holds the derivatives of ``f(g(t))``.
    """
    if not isinstance(f_taylor, Jet) or not isinstance(g, Jet):
        raise ContractError("jet_compose expects two jets")
    if f_taylor.order != g.order:
        raise ContractError(f"jet order mismatch: {f_taylor.order} vs {g.order}")
    n = g.order
    ft = f_taylor.taylor()
    h = [0] + g.taylor()[1:]
    out = [ft[0]] + [0] * n
    power = h
    for k in range(1, n + 1):
        for m in range(k, n + 1):
            out[m] = _add_terms(out[m], _mul_terms(ft[k], power[m]))
        if k < n:
            power = _poly_mul(power, h, n)
    return Jet.from_taylor(out)


def _poly_mul(a, b, n):
    out = [0] * (n + 1)
    for i, ai in enumerate(a):
        if _is_zero(ai):
            continue
        for j in range(n + 1 - i):
            out[i + j] = _add_terms(out[i + j], _mul_terms(ai, b[j]))
    return out


def _jet_exp(j):
    e = exp(j.value)
    return jet_compose(Jet([e] * (j.order + 1)), j)


def _jet_expm1(j):
    e = exp(j.value)
    return jet_compose(Jet([expm1(j.value)] + [e] * j.order), j)


def _log_derivs(base_value, shifted, order):
    r = 1 / shifted
    derivs = [base_value]
    p = 1
    for k in range(1, order + 1):
        p = r if k == 1 else p * r
        derivs.append(_scale(p, (-1) ** (k - 1) * math.factorial(k - 1)))
    return derivs


def _jet_log(j):
    return jet_compose(Jet(_log_derivs(log(j.value), j.value, j.order)), j)


def _jet_log1p(j):
    return jet_compose(Jet(_log_derivs(log1p(j.value), 1 + j.value, j.order)), j)


def _jet_sin(j):
    s, c = sin(j.value), cos(j.value)
    cycle = [s, c, -s, -c]
    return jet_compose(Jet([cycle[k % 4] for k in range(j.order + 1)]), j)


def _jet_cos(j):
    s, c = sin(j.value), cos(j.value)
    cycle = [c, -s, -c, s]
    return jet_compose(Jet([cycle[k % 4] for k in range(j.order + 1)]), j)


def _jet_sqrt(j):
    s = sqrt(j.value)
    r = 1 / j.value
    derivs = [s]
    coef = 1.0
    p = s
    for k in range(1, j.order + 1):
        coef *= 0.5 - (k - 1)
        p = p * r
        derivs.append(p * coef)
    return jet_compose(Jet(derivs), j)


exp.register(Jet, _jet_exp)
expm1.register(Jet, _jet_expm1)
log.register(Jet, _jet_log)
log1p.register(Jet, _jet_log1p)
sin.register(Jet, _jet_sin)
cos.register(Jet, _jet_cos)
sqrt.register(Jet, _jet_sqrt)
