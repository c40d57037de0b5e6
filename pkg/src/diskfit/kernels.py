"""Closed-form Gram entries ``(B_j, B_k)`` and moments ``(B_k, f)``.

Every basis element is expanded into *atoms*: a simple source (pole, log,
interior pole or interior zeta function) at one location, multiplied by a
complex constant and differentiated ``d`` times with respect to the
location.  Inner products of atoms are analytic functions ``K(s, z)`` of
``s = conj(z_row)`` and ``z = z_col``; derivatives in either argument come
from (nested) jets, so higher-order poles need no extra formulas.

Inner products are conjugate-linear in the first (row) argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from diskfit import scalars
from diskfit.errors import ConfigError, ContractError, DomainError
from diskfit.model import BasisKind, FitProblem, Geometry, NormKind, to_xcomplex
from diskfit.scalars import Jet, XComplex, XReal, as_xcomplex

__all__ = [
    "InvolutionPoint",
    "involution_point",
    "Atom",
    "atoms_of",
    "gram_entry",
    "moment_entry",
    "gram_matrix",
    "moment_vector",
    "cauchy_determinant",
]


@dataclass(frozen=True, eq=False)
class InvolutionPoint:
    """``p_k = 1/z_k`` and the conjugate involution point ``p_k* = 1/conj(z_k)``."""

    z: XComplex
    p: XComplex
    p_conj: XComplex

    def back(self):
        """Apply the map again; returns ``z_k``."""
        return 1 / self.p_conj.conj()


def involution_point(z):
    z = to_xcomplex(z)
    if np.all(z.abs2().hi == 0):
        raise DomainError("the origin has no involution point")
    return InvolutionPoint(z, 1 / z, 1 / z.conj())


# ---------------------------------------------------------------------------
# atoms
# ---------------------------------------------------------------------------

POLE = "pole"          # 1/(z - a), exterior
LOG = "log"            # -ln(1 - a/z), exterior
IPOLE = "ipole"        # 1/(a - z), interior
ZETA = "zeta"          # 1/(a - z) - 1/a, interior


@dataclass(frozen=True, eq=False)
class Atom:
    """Source primitive ``coeff * factor * d^deriv/da^deriv prim(z; a)``."""

    kind: str
    location: XComplex
    coeff: complex = 1.0
    deriv: int = 0
    factor: float = 1.0

    @property
    def at_origin(self):
        return bool(np.all(self.location.abs2().hi == 0))


def atoms_of(b, norm):
    """Expand a basis element into atoms for the given norm."""
    kind = b.kind
    if norm in (NormKind.SIGMA_INTERIOR, NormKind.D_INTERIOR):
        prim = IPOLE if norm is NormKind.SIGMA_INTERIOR else ZETA
        if kind is BasisKind.SIMPLE_POLE:
            return [Atom(prim, b.location)]
        if kind is BasisKind.HIGHER_POLE:
            m = b.order
            return [Atom(prim, b.location, deriv=m - 1,
                         factor=(-1) ** (m - 1) / math.factorial(m - 1))]
        raise ContractError(f"{kind.value} is not available for interior norms")
    if kind is BasisKind.SIMPLE_POLE or kind is BasisKind.INVERSE_Z:
        return [Atom(POLE, b.location)]
    if kind is BasisKind.HIGHER_POLE:
        m = b.order
        return [Atom(POLE, b.location, deriv=m - 1, factor=1.0 / math.factorial(m - 1))]
    if kind is BasisKind.LOG_ORIGIN:
        return [Atom(LOG, b.location)]
    if kind is BasisKind.LOG_PAIRED:
        return [Atom(LOG, b.location), Atom(LOG, b.paired, coeff=-1.0)]
    if kind is BasisKind.REAL_LOG:
        return [Atom(LOG, b.location)]
    if kind is BasisKind.REAL_DIPOLE_X:
        return [Atom(POLE, b.location)]
    if kind is BasisKind.REAL_DIPOLE_Y:
        return [Atom(POLE, b.location, coeff=-1j)]
    raise ContractError(f"unsupported basis kind {kind}")


def _check_compat(norm, geometry, b):
    geometry = Geometry(geometry)
    if norm.geometry is not geometry:
        raise ContractError(f"norm {norm.value} does not apply to {geometry.value} geometry")
    if (norm is NormKind.ENERGY_REAL) != b.kind.is_real:
        raise ContractError(f"basis kind {b.kind.value} is incompatible with norm {norm.value}")
    if norm is NormKind.SIGMA_EXTERIOR and b.kind in (BasisKind.LOG_ORIGIN, BasisKind.LOG_PAIRED):
        raise ContractError("logarithmic bases need the dirichlet norm")
    if geometry is Geometry.INTERIOR and b.kind not in (BasisKind.SIMPLE_POLE, BasisKind.HIGHER_POLE):
        raise ContractError(f"{b.kind.value} is not available for interior geometry")
    points = [b.location] if b.kind is not BasisKind.INVERSE_Z else []
    if b.paired is not None:
        points.append(b.paired)
    for z in points:
        side = np.sign((z.abs2() - 1.0).hi)
        if side == 0 or (geometry is Geometry.EXTERIOR and side > 0) or \
                (geometry is Geometry.INTERIOR and side < 0):
            raise ContractError(f"source {complex(z):.6g} is not strictly inside the source region")


# ---------------------------------------------------------------------------
# kernels K(s, z) for atom pairs
# ---------------------------------------------------------------------------

def _k_sigma(s, z):
    return 1 / (1 - s * z)


def _k_d_pole_pole(s, z):
    return (1 - s * z) ** -2 * 0.5


def _k_d_pole_log(s, z):
    return z / (1 - s * z) * 0.5


def _k_d_log_pole(s, z):
    return s / (1 - s * z) * 0.5


def _k_d_log_log(s, z):
    return scalars.log1p(-(s * z)) * -0.5


def _k_sigma_interior(s, z):
    return 1 / (s * z - 1)


def _k_d_interior(s, z):
    return (s * z - 1) ** -2 * 0.5


def _kernel(norm, row_kind, col_kind):
    if norm is NormKind.SIGMA_EXTERIOR:
        return _k_sigma
    if norm is NormKind.SIGMA_INTERIOR:
        return _k_sigma_interior
    if norm is NormKind.D_INTERIOR:
        return _k_d_interior
    table = {
        (POLE, POLE): _k_d_pole_pole,
        (POLE, LOG): _k_d_pole_log,
        (LOG, POLE): _k_d_log_pole,
        (LOG, LOG): _k_d_log_log,
    }
    return table[(row_kind, col_kind)]


def _coef(x, n):
    """n-th jet coefficient, tolerating exact integer zeros."""
    if isinstance(x, Jet):
        return x.coeffs[n]
    return 0 if n else x


def _derivative(func, s, z, ds, dz):
    """``d^ds/ds^ds d^dz/dz^dz func(s, z)``."""
    if ds == 0 and dz == 0:
        return func(s, z)
    if dz == 0:
        return _coef(func(Jet.variable(s, ds), z), ds)
    if ds == 0:
        return _coef(func(s, Jet.variable(z, dz)), dz)
    sv = Jet.variable(Jet.constant(s, dz), ds)
    zv = Jet.constant(Jet.variable(z, dz), ds)
    return _coef(_coef(func(sv, zv), ds), dz)


def _as_block(value, shape):
    if isinstance(value, (int, float, complex)) and value == 0:
        return XComplex.zeros(shape)
    v = as_xcomplex(value)
    if v.shape != shape:
        v = v.broadcast_to(shape)
    return v


def _finish(norm, value):
    """Energy-norm entries are real parts of the complex Dirichlet ones."""
    if norm is NormKind.ENERGY_REAL:
        return XComplex(value.re, XReal.zeros(value.shape))
    return value


def _atom_block(norm, row_atoms, col_atoms):
    """Inner products between two equal-(kind, deriv) groups of atoms."""
    ra, ca = row_atoms[0], col_atoms[0]
    shape = (len(row_atoms), len(col_atoms))
    s = _stack([a.location for a in row_atoms]).conj().reshape(-1, 1)
    z = _stack([a.location for a in col_atoms]).reshape(1, -1)
    func = _kernel(norm, ra.kind, ca.kind)
    block = _as_block(_derivative(func, s, z, ra.deriv, ca.deriv), shape)
    rc = np.array([np.conj(a.coeff) * a.factor for a in row_atoms]).reshape(-1, 1)
    cc = np.array([a.coeff * a.factor for a in col_atoms], dtype=complex).reshape(1, -1)
    weights = rc * cc
    if np.all(weights.imag == 0):
        block = block * weights.real
    else:
        block = block * weights
    return block


def _stack(values):
    re_hi = np.array([float(v.re.hi) for v in values])
    re_lo = np.array([float(v.re.lo) for v in values])
    im_hi = np.array([float(v.im.hi) for v in values])
    im_lo = np.array([float(v.im.lo) for v in values])
    return XComplex(XReal(re_hi, re_lo), XReal(im_hi, im_lo))


def _group(indexed_atoms):
    groups = {}
    for idx, atom in indexed_atoms:
        groups.setdefault((atom.kind, atom.deriv), []).append((idx, atom))
    return [groups[k] for k in sorted(groups)]


def gram_matrix(norm, basis):
    """Full Gram matrix ``T[j, k] = (B_j, B_k)`` as an N x N ``XComplex``."""
    basis = list(basis)
    n = len(basis)
    if n == 0:
        raise ContractError("basis must not be empty")
    indexed = [(i, a) for i, b in enumerate(basis) for a in atoms_of(b, norm)]
    groups = _group(indexed)
    single = len(indexed) == n
    T = XComplex.zeros((n, n))
    for rg in groups:
        ridx = [i for i, _ in rg]
        for cg in groups:
            cidx = [i for i, _ in cg]
            block = _atom_block(norm, [a for _, a in rg], [a for _, a in cg])
            if single:
                T[np.ix_(ridx, cidx)] = block
                continue
            for bi, i in enumerate(ridx):
                for bj, j in enumerate(cidx):
                    T[i, j] = T[i, j] + block[bi, bj]
    return _finish(norm, T)


def gram_entry(norm, geometry, b_row, b_col):
    """Closed-form inner product ``(b_row, b_col)`` for one pair of basis elements."""
    _check_compat(norm, geometry, b_row)
    _check_compat(norm, geometry, b_col)
    total = XComplex.zeros(())
    for ra in atoms_of(b_row, norm):
        for ca in atoms_of(b_col, norm):
            total = total + _atom_block(norm, [ra], [ca])[0, 0]
    return _finish(norm, total)


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------

def _moment_func(norm, kind, f):
    """Moment of one atom as an analytic function of ``s = conj(a)``."""
    if norm is NormKind.SIGMA_EXTERIOR:
        return lambda s: f.eval(1 / s) / s
    if norm is NormKind.SIGMA_INTERIOR:
        return lambda s: f.eval(1 / s) / s
    if norm is NormKind.D_INTERIOR:
        return lambda s: f.derivative(1 / s) * (s ** -2) * 0.5
    if kind == POLE:
        return lambda s: f.derivative(1 / s) * (s ** -2) * -0.5
    return lambda s: f.eval(1 / s) * 0.5


def _origin_moment(norm, f):
    a1 = f.a1_value()
    if a1 is None:
        raise ConfigError(f"target {f.label!r} has no a1 coefficient; required by inverse_z", "target.a1")
    return a1 if norm is NormKind.SIGMA_EXTERIOR else a1 * 0.5


def _atom_moment(norm, atom, f):
    if atom.at_origin:
        if atom.deriv:
            raise ContractError("higher-order poles at the origin are not supported")
        value = as_xcomplex(_origin_moment(norm, f))
    else:
        func = _moment_func(norm, atom.kind, f)
        s = atom.location.conj()
        if atom.deriv:
            value = _coef(func(Jet.variable(s, atom.deriv)), atom.deriv)
        else:
            value = func(s)
        value = as_xcomplex(value)
    w = np.conj(atom.coeff) * atom.factor
    return value * (w.real if w.imag == 0 else w)


def moment_entry(norm, geometry, b, f):
    """``A_k = (B_k, f)`` for one basis element."""
    _check_compat(norm, geometry, b)
    total = XComplex.zeros(())
    for atom in atoms_of(b, norm):
        total = total + _atom_moment(norm, atom, f)
    return _finish(norm, total)


def moment_vector(norm, basis, f):
    """Moment vector ``A`` over a basis, as an N ``XComplex``."""
    basis = list(basis)
    A = XComplex.zeros((len(basis),))
    for i, b in enumerate(basis):
        acc = XComplex.zeros(())
        for atom in atoms_of(b, norm):
            acc = acc + _atom_moment(norm, atom, f)
        A[i] = acc
    return _finish(norm, A)


def problem_system(problem):
    """(T, A) for a validated ``FitProblem``."""
    if not isinstance(problem, FitProblem):
        raise ContractError("expected a FitProblem")
    T = gram_matrix(problem.norm, problem.basis)
    A = moment_vector(problem.norm, problem.basis, problem.target)
    return T, A


# ---------------------------------------------------------------------------
# Cauchy determinant
# ---------------------------------------------------------------------------

def cauchy_determinant(sources):
    """Determinant of the exterior standard-norm simple-pole Gram matrix.

    Uses the Cauchy determinant product with ``p_k = 1/z_k``; no matrix is
    formed.
    """
    zs = [to_xcomplex(z) for z in sources]
    if not zs:
        raise DomainError("no sources given")
    for z in zs:
        if np.all(z.abs2().hi == 0):
            raise DomainError("sources must be nonzero")
    n = len(zs)
    for i in range(n):
        for j in range(i):
            if np.all((zs[i] - zs[j]).abs2().hi == 0):
                raise DomainError("coincident sources")
    ps = [1 / z for z in zs]
    zc = [z.conj() for z in zs]
    num = XComplex(np.asarray(1 + 0j))
    for i in range(n):
        for j in range(i):
            num = num * (ps[i] - ps[j]) * (zc[j] - zc[i])
    den = XComplex(np.asarray(1 + 0j))
    for i in range(n):
        for j in range(n):
            den = den * (ps[i] - zc[j])
    prod_p = XComplex(np.asarray(1 + 0j))
    for p in ps:
        prod_p = prod_p * p
    return num / den * prod_p
