"""Problem description types: geometry, norms, basis elements and targets.

Locations are stored as 0-d ``XComplex`` values so that ring sources such as
``0.27 * exp(2*pi*i*k/16)`` keep full double-double accuracy.  Real planar
points ``(x, y)`` are stored the same way as ``x + iy``.
"""

from __future__ import annotations

import ast
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from diskfit import scalars
from diskfit.errors import ConfigError, ContractError, DomainError, UnknownTargetError
from diskfit.scalars import Jet, XComplex, XReal, as_xcomplex

__all__ = [
    "Geometry",
    "NormKind",
    "BasisKind",
    "BasisElement",
    "TargetFunction",
    "FitProblem",
    "builtin_target",
    "BUILTIN_TARGETS",
    "expression_target",
    "ring_sources",
    "to_xreal",
    "to_xcomplex",
]

MAX_POLE_ORDER = 5


class Geometry(enum.Enum):
    EXTERIOR = "exterior"
    INTERIOR = "interior"


class NormKind(enum.Enum):
    SIGMA_EXTERIOR = "sigma"
    D_EXTERIOR = "dirichlet"
    SIGMA_INTERIOR = "sigma_interior"
    D_INTERIOR = "dirichlet_interior"
    ENERGY_REAL = "energy"

    @property
    def geometry(self):
        if self in (NormKind.SIGMA_INTERIOR, NormKind.D_INTERIOR):
            return Geometry.INTERIOR
        return Geometry.EXTERIOR

    @property
    def is_dirichlet(self):
        return self in (NormKind.D_EXTERIOR, NormKind.D_INTERIOR, NormKind.ENERGY_REAL)

    @classmethod
    def from_name(cls, name, geometry):
        """Map a config-level norm name plus geometry to a norm kind."""
        geometry = Geometry(geometry)
        table = {
            ("sigma", Geometry.EXTERIOR): cls.SIGMA_EXTERIOR,
            ("dirichlet", Geometry.EXTERIOR): cls.D_EXTERIOR,
            ("sigma", Geometry.INTERIOR): cls.SIGMA_INTERIOR,
            ("dirichlet", Geometry.INTERIOR): cls.D_INTERIOR,
            ("energy", Geometry.EXTERIOR): cls.ENERGY_REAL,
        }
        try:
            return table[(name, geometry)]
        except KeyError:
            raise ContractError(f"norm {name!r} is not available for {geometry.value} geometry") from None


class BasisKind(enum.Enum):
    SIMPLE_POLE = "pole"
    HIGHER_POLE = "pole_order_m"
    LOG_PAIRED = "log_paired"
    LOG_ORIGIN = "log_origin"
    INVERSE_Z = "inverse_z"
    REAL_LOG = "real_log"
    REAL_DIPOLE_X = "real_dipole_x"
    REAL_DIPOLE_Y = "real_dipole_y"

    @property
    def is_real(self):
        return self in (BasisKind.REAL_LOG, BasisKind.REAL_DIPOLE_X, BasisKind.REAL_DIPOLE_Y)


def to_xreal(value):
    """Exact conversion of int/float/str/Fraction/XReal to a 0-d ``XReal``."""
    if isinstance(value, XReal):
        return value
    if isinstance(value, str):
        return XReal.from_string(value)
    if isinstance(value, Fraction):
        return XReal.from_fraction(value)
    return XReal(float(value))


def to_xcomplex(value):
    """Convert a complex-like value, ``(re, im)`` pair or ``XComplex`` to 0-d ``XComplex``."""
    if isinstance(value, XComplex):
        return value
    if isinstance(value, XReal):
        return as_xcomplex(value)
    if isinstance(value, (tuple, list)):
        if len(value) != 2:
            raise ContractError("complex value must be a [re, im] pair")
        return XComplex(to_xreal(value[0]), to_xreal(value[1]))
    if isinstance(value, (str, Fraction)):
        return XComplex(to_xreal(value))
    return XComplex(np.asarray(complex(value)))


@dataclass(frozen=True, eq=False)
class BasisElement:
    """One basis function.

    ``location`` is the source ``z_k`` (planar point for real kinds).  For
    ``HIGHER_POLE`` the pole order ``order`` is in 2..5; ``paired`` is the
    auxiliary point of a ``LOG_PAIRED`` element.  ``INVERSE_Z`` ignores
    ``location`` and sits at the origin.
    """

    kind: BasisKind
    location: XComplex = field(default_factory=lambda: XComplex(np.asarray(0j)))
    order: int = 1
    paired: Optional[XComplex] = None

    def __post_init__(self):
        object.__setattr__(self, "location", to_xcomplex(self.location))
        if self.paired is not None:
            object.__setattr__(self, "paired", to_xcomplex(self.paired))
        if self.kind is BasisKind.HIGHER_POLE:
            if not 2 <= self.order <= MAX_POLE_ORDER:
                raise ContractError(f"higher pole order must be in 2..{MAX_POLE_ORDER}, got {self.order}")
        elif self.order != 1:
            raise ContractError(f"order is only meaningful for higher poles, got {self.order}")
        if self.kind is BasisKind.LOG_PAIRED:
            if self.paired is None:
                raise ContractError("log_paired element needs a paired point")
            if np.all((self.paired - self.location).abs2().hi == 0):
                raise ContractError("paired point coincides with the source")
        elif self.paired is not None:
            raise ContractError("paired point given for a non-paired basis kind")
        if self.kind is BasisKind.INVERSE_Z:
            object.__setattr__(self, "location", XComplex(np.asarray(0j)))

    @property
    def z(self):
        """Location as a Python complex (display and float64 work)."""
        return complex(self.location)

    def key(self):
        """Identity used for the pairwise-distinctness rule."""
        loc = self.location
        parts = (float(loc.re.hi), float(loc.re.lo), float(loc.im.hi), float(loc.im.lo))
        pair = None
        if self.paired is not None:
            p = self.paired
            pair = (float(p.re.hi), float(p.re.lo), float(p.im.hi), float(p.im.lo))
        return (self.kind, self.order, parts, pair)

    def describe(self):
        text = f"{self.kind.value}@{self.z:.6g}"
        if self.kind is BasisKind.HIGHER_POLE:
            text += f"^{self.order}"
        if self.paired is not None:
            text += f"~{complex(self.paired):.6g}"
        return text


# ---------------------------------------------------------------------------
# targets
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TargetFunction:
    """Analytic target ``f`` (or the standard completion of a harmonic target).

    ``func`` must accept ``XComplex`` arrays, plain complex numbers and jets.
    When ``deriv`` is omitted the derivative is obtained by jet
    differentiation of ``func``.  ``real`` marks harmonic targets whose
    physical value is ``Re func``.
    """

    label: str
    func: Callable
    deriv: Optional[Callable] = None
    a1: Optional[complex] = None
    real: bool = False
    geometry: Geometry = Geometry.EXTERIOR

    def eval(self, z):
        return self.func(z)

    def eval_real(self, z):
        """Value of the harmonic target ``Re f``."""
        return _real_part(self.func(z))

    def derivative(self, z):
        if self.deriv is not None:
            return self.deriv(z)
        return self.func(Jet.variable(z, 1)).coeffs[1]

    def a1_value(self):
        """``a1`` as a 0-d XComplex, or ``None``."""
        if self.a1 is None:
            return None
        return to_xcomplex(self.a1)


def _real_part(value):
    if isinstance(value, XComplex):
        return value.re
    return np.real(value)


def _i_power(n):
    return [1, 1j, -1, -1j][n % 4]


def _ring_constants(radius):
    r = to_xreal(radius)
    return [XComplex(r * _i_power(n).real, r * _i_power(n).imag) for n in range(4)]


def _f1():
    coeffs = [XComplex(XReal(0.5), XReal(0.5)) / scalars.sqrt(XReal(float(n))) for n in range(1, 6)]

    def f(z):
        w = 1 / z
        acc = coeffs[4]
        for c in reversed(coeffs[:4]):
            acc = acc * w + c
        return acc * w

    return TargetFunction("f1", f, a1=(0.5 + 0.5j))


def _f2():
    zn = _ring_constants(Fraction(3, 4))
    c = XComplex(XReal.from_fraction(Fraction(1, 6)), XReal.from_fraction(Fraction(1, 6)))

    def f(z):
        acc = 0
        for a in zn:
            acc = acc + 1 / (z - a)
        return acc * c

    return TargetFunction("f2", f, a1=2 * (1 + 1j) / 3)


def _f3():
    zn = _ring_constants(Fraction(3, 4))

    def f(z):
        w = 1 / z
        acc = 0
        for a in zn:
            acc = acc - scalars.log1p(-(w * a))
        return acc * (2 + 2j)

    return TargetFunction("f3", f, a1=0j)


def _f4():
    return TargetFunction("f4", lambda z: scalars.sin(1 / z), a1=1 + 0j)


def _f5():
    def f(z):
        h = scalars.sin(1 / z * 0.5)
        return h * h * -4.0

    return TargetFunction("f5", f, a1=0j)


def _f6():
    return TargetFunction("f6", lambda z: scalars.expm1(1 / z), a1=1 + 0j)


def _f_real():
    xn = _ring_constants(Fraction(1, 3))

    def f(z):
        w = 1 / z
        acc = 0
        for n, a in enumerate(xn, start=1):
            term = scalars.log1p(-(w * a))
            acc = acc + term * (8.0 if n % 2 else -8.0)
        return acc

    return TargetFunction("F_real", f, a1=0j, real=True)


BUILTIN_TARGETS = {
    "f1": _f1,
    "f2": _f2,
    "f3": _f3,
    "f4": _f4,
    "f5": _f5,
    "f6": _f6,
    "F_real": _f_real,
}


def builtin_target(name):
    """Return one of the built-in test functions ``f1``..``f6`` or ``F_real``."""
    try:
        factory = BUILTIN_TARGETS[name]
    except KeyError:
        raise UnknownTargetError(f"unknown built-in target {name!r}; "
                                 f"choose from {', '.join(BUILTIN_TARGETS)}") from None
    return factory()


# ---------------------------------------------------------------------------
# closed-form expression targets
# ---------------------------------------------------------------------------

_EXPR_FUNCS = {
    "exp": scalars.exp,
    "expm1": scalars.expm1,
    "log": scalars.log,
    "log1p": scalars.log1p,
    "sin": scalars.sin,
    "cos": scalars.cos,
    "sqrt": scalars.sqrt,
}
_EXPR_CONSTS = {"i": 1j, "j": 1j, "pi": math.pi, "e": math.e}


class _ExprCompiler:
    def __init__(self, text):
        try:
            tree = ast.parse(text, mode="eval")
        except SyntaxError as exc:
            raise ConfigError(f"cannot parse expression {text!r}: {exc.msg}", "target.expression") from None
        self.body = tree.body
        self._check(self.body)

    def _check(self, node):
        allowed = (ast.BinOp, ast.UnaryOp, ast.Call, ast.Name, ast.Constant, ast.Load,
                   ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd)
        for sub in ast.walk(node):
            if not isinstance(sub, allowed):
                raise ConfigError(f"unsupported syntax {type(sub).__name__}", "target.expression")
            if isinstance(sub, ast.Call):
                if not isinstance(sub.func, ast.Name) or sub.func.id not in _EXPR_FUNCS:
                    raise ConfigError("only exp, expm1, log, log1p, sin, cos, sqrt may be called",
                                      "target.expression")
                if len(sub.args) != 1 or sub.keywords:
                    raise ConfigError("functions take exactly one argument", "target.expression")
            if isinstance(sub, ast.Name) and sub.id != "z" and sub.id not in _EXPR_CONSTS \
                    and sub.id not in _EXPR_FUNCS:
                raise ConfigError(f"unknown name {sub.id!r}", "target.expression")
            if isinstance(sub, ast.Constant) and not isinstance(sub.value, (int, float, complex)):
                raise ConfigError("only numeric literals are allowed", "target.expression")
            if isinstance(sub, ast.BinOp) and isinstance(sub.op, ast.Pow):
                exp_node = sub.right
                if isinstance(exp_node, ast.UnaryOp) and isinstance(exp_node.op, ast.USub):
                    exp_node = exp_node.operand
                if not (isinstance(exp_node, ast.Constant) and isinstance(exp_node.value, int)):
                    raise ConfigError("exponents must be integer literals", "target.expression")

    def __call__(self, z):
        return self._eval(self.body, z)

    def _eval(self, node, z):
        if isinstance(node, ast.Constant):
            return node.value
        if isinstance(node, ast.Name):
            return z if node.id == "z" else _EXPR_CONSTS[node.id]
        if isinstance(node, ast.UnaryOp):
            v = self._eval(node.operand, z)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Call):
            return _EXPR_FUNCS[node.func.id](self._eval(node.args[0], z))
        left = self._eval(node.left, z)
        if isinstance(node.op, ast.Pow):
            return left ** ast.literal_eval(node.right)
        right = self._eval(node.right, z)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        return left / right


def expression_target(text, a1=None, real=False, geometry=Geometry.EXTERIOR, label=None):
    """Build a target from a closed-form expression in ``z``.

    Examples
    --------
    >>> t = expression_target("1/(z - 0.5)", a1=1)
    >>> round(abs(t.eval(2.0)), 6)
    0.666667
    """
    compiled = _ExprCompiler(text)
    return TargetFunction(label or text, compiled, a1=a1, real=real, geometry=Geometry(geometry))


# ---------------------------------------------------------------------------
# fit problems
# ---------------------------------------------------------------------------

_INTERIOR_KINDS = (BasisKind.SIMPLE_POLE, BasisKind.HIGHER_POLE)
_COMPLEX_EXTERIOR_KINDS = (BasisKind.SIMPLE_POLE, BasisKind.HIGHER_POLE, BasisKind.LOG_PAIRED,
                           BasisKind.LOG_ORIGIN, BasisKind.INVERSE_Z)
_LOG_KINDS = (BasisKind.LOG_PAIRED, BasisKind.LOG_ORIGIN)


def _modulus_side(z):
    """-1 inside, 0 on, +1 outside the unit circle (exact double-double test)."""
    r2 = z.abs2() - 1.0
    return int(np.sign(r2.hi))


@dataclass(frozen=True, eq=False)
class FitProblem:
    """A complete least-squares problem; validated on construction."""

    geometry: Geometry
    norm: NormKind
    basis: tuple
    target: TargetFunction

    def __post_init__(self):
        object.__setattr__(self, "geometry", Geometry(self.geometry))
        object.__setattr__(self, "basis", tuple(self.basis))
        if not self.basis:
            raise ContractError("basis must not be empty")
        if self.norm.geometry is not self.geometry:
            raise ContractError(f"norm {self.norm.value} does not apply to {self.geometry.value} geometry")
        seen = set()
        inverse_count = 0
        for idx, b in enumerate(self.basis):
            where = f"basis[{idx}]"
            if self.norm is NormKind.ENERGY_REAL:
                if not b.kind.is_real:
                    raise ContractError(f"{where}: energy norm needs real basis kinds, got {b.kind.value}")
            elif b.kind.is_real:
                raise ContractError(f"{where}: real basis kind {b.kind.value} needs the energy norm")
            if self.geometry is Geometry.INTERIOR and b.kind not in _INTERIOR_KINDS:
                raise ContractError(f"{where}: {b.kind.value} is not available for interior geometry")
            if self.norm is NormKind.SIGMA_EXTERIOR and b.kind in _LOG_KINDS:
                raise ContractError(f"{where}: logarithmic bases need the dirichlet norm")
            if b.kind is BasisKind.INVERSE_Z:
                inverse_count += 1
                if inverse_count > 1:
                    raise ContractError("inverse_z may appear at most once")
            else:
                self._check_source(b.location, where)
                if b.kind in _LOG_KINDS or b.kind is BasisKind.HIGHER_POLE or b.kind.is_real \
                        or self.geometry is Geometry.INTERIOR:
                    if np.all(b.location.abs2().hi == 0):
                        raise ContractError(f"{where}: source at the origin is only allowed for simple poles "
                                            "(use inverse_z)")
            if b.paired is not None:
                self._check_source(b.paired, where + ".paired")
            key = b.key()
            if key in seen:
                raise ContractError(f"{where}: duplicate basis element {b.describe()}")
            seen.add(key)
        origin_poles = [b for b in self.basis if b.kind is BasisKind.SIMPLE_POLE
                        and np.all(b.location.abs2().hi == 0)]
        if origin_poles and inverse_count:
            raise ContractError("a simple pole at the origin duplicates inverse_z")

    def _check_source(self, z, where):
        side = _modulus_side(z)
        if side == 0:
            raise DomainError(f"{where}: source on boundary |z| = 1")
        if self.geometry is Geometry.EXTERIOR and side > 0:
            raise DomainError(f"{where}: exterior sources must satisfy |z_k| < 1")
        if self.geometry is Geometry.INTERIOR and side < 0:
            raise DomainError(f"{where}: interior sources must satisfy |z_k| > 1")

    @property
    def is_real(self):
        return self.norm is NormKind.ENERGY_REAL

    @property
    def size(self):
        return len(self.basis)


def ring_sources(radius, count, kind=BasisKind.SIMPLE_POLE, geometry=Geometry.EXTERIOR, order=1):
    """Equally spaced sources ``R_B exp(2 pi i (k-1)/N_k)``, ``k = 1..N_k``.

    Parameters
    ----------
    radius : float, str, Fraction or XReal
        Ring radius.  Strings such as ``"0.27"`` are converted exactly.
    count : int
        Number of sources.
    kind : BasisKind
        Kind given to every element (not ``INVERSE_Z`` or ``LOG_PAIRED``).
    geometry : Geometry
        Decides the admissible radius range.
    order : int
        Pole order for ``HIGHER_POLE``.
    """
    geometry = Geometry(geometry)
    r = to_xreal(radius)
    if int(count) != count or count < 1:
        raise ContractError(f"source count must be a positive integer, got {count}")
    rv = float(r.hi)
    if geometry is Geometry.EXTERIOR and not 0 < rv < 1:
        raise DomainError(f"exterior ring radius must satisfy 0 < R_B < 1, got {rv}")
    if geometry is Geometry.INTERIOR and not rv > 1:
        raise DomainError(f"interior ring radius must exceed 1, got {rv}")
    if kind in (BasisKind.INVERSE_Z, BasisKind.LOG_PAIRED):
        raise ContractError(f"ring_sources cannot build {kind.value} elements")
    k = np.arange(count, dtype=float)
    theta = scalars.PI * (2.0 * k) / float(count)
    # quarter-turn points get exact cos/sin
    c = scalars.cos(theta)
    s = scalars.sin(theta)
    quarter = (4 * np.arange(count)) % count == 0
    if np.any(quarter):
        idx = (4 * np.arange(count)) // count
        for j in np.nonzero(quarter)[0]:
            cv, sv = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][idx[j] % 4]
            c[int(j)] = XReal(cv)
            s[int(j)] = XReal(sv)
    x = c * r
    y = s * r
    return [BasisElement(kind, XComplex(x[i], y[i]), order=order) for i in range(count)]
