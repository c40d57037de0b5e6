"""Double-double dense linear algebra for small symmetric systems.

Complex Hermitian normal equations ``T mu = A`` are turned into a real
symmetric system of twice the size and solved either by Householder QR or
through a Jacobi eigendecomposition (which also yields the spectrum,
condition number and determinant).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from diskfit import scalars
from diskfit.errors import ContractError, SingularityError
from diskfit.scalars import XComplex, XReal, xsum

__all__ = [
    "GramSystem",
    "Spectrum",
    "embed_real",
    "householder_solve",
    "jacobi_eigen",
    "truncated_solve",
    "frobenius",
]

# only pivots that vanish outright count as singular; graded Gram systems
# legitimately carry pivots far below the double-double unit roundoff
SINGULAR_RATIO = 2.0 ** -400
JACOBI_MAX_SWEEPS = 60
JACOBI_THRESHOLD = 1e-30
JACOBI_TOL = 1e-25


def frobenius(M):
    """Frobenius norm of an XReal or XComplex matrix, in double-double."""
    if isinstance(M, XComplex):
        sq = M.abs2()
    else:
        sq = M * M
    return scalars.sqrt(xsum(sq.reshape(-1), axis=0))


def _identity(n):
    return XReal(np.eye(n))


def _max_abs(M):
    return float(np.max(np.abs(M.hi))) if M.size else 0.0


# ---------------------------------------------------------------------------
# real embedding
# ---------------------------------------------------------------------------

def embed_real(T, A):
    """Real symmetric form of a Hermitian system.

    Returns ``(realT, realA)`` with ``realT = [[T_R, -T_I], [T_I, T_R]]`` and
    ``realA = [A_R; A_I]``, so that ``realT (alpha; beta) = realA`` is
    equivalent to ``T (alpha + i beta) = A``.

    Raises
    ------
    ContractError
        If ``T`` is not Hermitian to ``1e-20 * ||T||``.
    """
    T = scalars.as_xcomplex(T)
    A = scalars.as_xcomplex(A)
    n = T.shape[0]
    if T.shape != (n, n) or A.shape != (n,):
        raise ContractError(f"shape mismatch: T {T.shape}, A {A.shape}")
    asym = T - T.T.conj()
    scale = float(frobenius(T).hi)
    if np.sqrt(np.max(asym.abs2().hi, initial=0.0)) > 1e-20 * scale:
        raise ContractError("matrix is not Hermitian")
    R = XReal.zeros((2 * n, 2 * n))
    R[:n, :n] = T.re
    R[:n, n:] = -T.im
    R[n:, :n] = T.im
    R[n:, n:] = T.re
    b = XReal.zeros((2 * n,))
    b[:n] = A.re
    b[n:] = A.im
    return R, b


def unembed(x):
    """Recombine ``(alpha; beta)`` into ``alpha + i beta``."""
    n = x.shape[0] // 2
    return XComplex(x[:n], x[n:])


# ---------------------------------------------------------------------------
# Householder QR
# ---------------------------------------------------------------------------

def householder_solve(M, b):
    """Solve ``M x = b`` by Householder QR in double-double.

    Parameters
    ----------
    M : XReal, shape (n, n)
    b : XReal, shape (n,)

    Raises
    ------
    SingularityError
        When a diagonal of ``R`` vanishes (below ``2**-400 * ||M||_F``).
    """
    M = M if isinstance(M, XReal) else XReal(M)
    b = b if isinstance(b, XReal) else XReal(b)
    n = M.shape[0]
    if M.shape != (n, n) or b.shape != (n,):
        raise ContractError(f"shape mismatch: M {M.shape}, b {b.shape}")
    floor = float(frobenius(M).hi) * SINGULAR_RATIO
    R = M.copy()
    y = b.copy()
    for k in range(n):
        x = R[k:, k]
        norm_x = scalars.sqrt(xsum(x * x))
        if float(norm_x.hi) <= floor:
            raise SingularityError(f"matrix is numerically singular at column {k}")
        sign = -1.0 if float(x.hi[0]) >= 0 else 1.0
        alpha = norm_x * sign
        v = x.copy()
        v[0] = x[0] - alpha
        vv = xsum(v * v)
        if float(vv.hi) == 0.0:
            continue
        beta = 2.0 / vv
        vcol = v.reshape(-1, 1)
        sub = R[k:, k:]
        w = xsum(vcol * sub, axis=0)
        R[k:, k:] = sub - (vcol * beta) * w.reshape(1, -1)
        y[k:] = y[k:] - v * (beta * xsum(v * y[k:]))
    for k in range(n):
        if abs(float(R.hi[k, k])) <= floor:
            raise SingularityError(f"matrix is numerically singular at column {k}")
    x = XReal.zeros((n,))
    for k in range(n - 1, -1, -1):
        acc = y[k]
        if k + 1 < n:
            acc = acc - xsum(R[k, k + 1:] * x[k + 1:])
        x[k] = acc / R[k, k]
    return x


# ---------------------------------------------------------------------------
# Jacobi eigensolver
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigen-analysis of a symmetric matrix.

    ``eigenvalues`` are sorted descending; ``eigenvectors[:, i]`` belongs to
    ``eigenvalues[i]``.  ``condition_number`` is ``max|lambda| / min|lambda|``
    (the singular-value ratio), which equals ``max/min`` for positive spectra.
    """

    eigenvalues: XReal
    eigenvectors: XReal
    sweeps: int
    off_norm: float

    @property
    def condition_number(self):
        return condition_of(self.eigenvalues)

    @property
    def size(self):
        return self.eigenvalues.shape[0]

    def product(self):
        """Product of all eigenvalues (fixed order, double-double)."""
        acc = XReal(1.0)
        for i in range(self.size):
            acc = acc * self.eigenvalues[i]
        return acc

    def values(self):
        return self.eigenvalues.to_float()


def condition_of(eigenvalues):
    mags = abs(eigenvalues)
    i_max = int(np.argmax(mags.hi))
    i_min = int(np.argmin(mags.hi))
    if float(mags.hi[i_min]) == 0:
        return XReal(np.inf)
    return mags[i_max] / mags[i_min]


def _round_robin(n):
    """Rounds of disjoint index pairs covering all pairs once (circle method)."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = []
        for i in range(m // 2):
            p, q = players[i], players[m - 1 - i]
            if p < n and q < n:
                pairs.append((min(p, q), max(p, q)))
        rounds.append(pairs)
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _off_norm(A):
    n = A.shape[0]
    mask = ~np.eye(n, dtype=bool)
    off = XReal(A.hi[mask], A.lo[mask])
    return scalars.sqrt(xsum(off * off))


def jacobi_eigen(M):
    """Eigendecomposition of a real symmetric matrix by parallel-order Jacobi.

    Each sweep visits every off-diagonal pair once, grouped into rounds of
    disjoint pairs that are rotated together.  The order is fixed, so results
    are bit-reproducible.

    Raises
    ------
    ContractError
        If ``M`` is not symmetric.
    """
    M = M if isinstance(M, XReal) else XReal(M)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ContractError(f"matrix must be square, got {M.shape}")
    norm_m = float(frobenius(M).hi)
    asym = M - M.T
    if _max_abs(asym) > 1e-20 * max(norm_m, np.finfo(float).tiny):
        raise ContractError("matrix is not symmetric")
    A = M.copy()
    V = _identity(n)
    rounds = _round_robin(n)
    sweeps = 0
    off = float(_off_norm(A).hi) if n > 1 else 0.0
    while n > 1 and off > JACOBI_TOL * norm_m and sweeps < JACOBI_MAX_SWEEPS:
        sweeps += 1
        for pairs in rounds:
            if not pairs:
                continue
            P = np.array([p for p, _ in pairs])
            Q = np.array([q for _, q in pairs])
            _rotate(A, V, P, Q)
        off = float(_off_norm(A).hi)
    diag = XReal(np.diagonal(A.hi).copy(), np.diagonal(A.lo).copy())
    order = np.lexsort((np.arange(n), -diag.to_float()))
    evals = diag[order]
    evecs = V[:, order]
    return Spectrum(evals, evecs, sweeps, off)


def _rotate(A, V, P, Q):
    app = A[P, P]
    aqq = A[Q, Q]
    apq = A[P, Q]
    mag = np.abs(apq.hi)
    active = (mag > JACOBI_THRESHOLD * np.sqrt(np.abs(app.hi * aqq.hi))) & (mag > 0)
    if not np.any(active):
        return
    safe_apq = XReal(np.where(active, apq.hi, 1.0), np.where(active, apq.lo, 0.0))
    with np.errstate(all="ignore"):
        theta = (aqq - app) / (safe_apq * 2.0)
        big = np.abs(theta.hi) > 1e100
        abs_theta = abs(theta)
        t = 1.0 / (abs_theta + scalars.sqrt(theta * theta + 1.0))
        t_big = 0.5 / abs_theta
    t = XReal(np.where(big, t_big.hi, t.hi), np.where(big, t_big.lo, t.lo))
    t = t * np.where(theta.hi < 0, -1.0, 1.0)
    t = XReal(np.where(active, t.hi, 0.0), np.where(active, t.lo, 0.0))
    c = 1.0 / scalars.sqrt(t * t + 1.0)
    s = t * c

    cr, sr = c.reshape(-1, 1), s.reshape(-1, 1)
    AP, AQ = A[P, :], A[Q, :]
    A[P, :] = cr * AP - sr * AQ
    A[Q, :] = sr * AP + cr * AQ
    cc, sc = c.reshape(1, -1), s.reshape(1, -1)
    AP, AQ = A[:, P], A[:, Q]
    A[:, P] = cc * AP - sc * AQ
    A[:, Q] = sc * AP + cc * AQ
    new_pp = app - t * apq
    new_qq = aqq + t * apq
    zero = XReal.zeros(P.shape)
    A[P, Q] = XReal(np.where(active, zero.hi, apq.hi), np.where(active, zero.lo, apq.lo))
    A[Q, P] = A[P, Q]
    A[P, P] = new_pp
    A[Q, Q] = new_qq
    VP, VQ = V[:, P], V[:, Q]
    V[:, P] = cc * VP - sc * VQ
    V[:, Q] = sc * VP + cc * VQ


# ---------------------------------------------------------------------------
# truncated solve
# ---------------------------------------------------------------------------

def truncated_solve(M, b, drop_count, spectrum=None, pair_size=1):
    """Solve ``M x = b`` in the span of the largest eigenvectors.

    ``drop_count`` smallest eigenvalues (times ``pair_size``, which is 2 for
    real embeddings of complex systems) are discarded.  ``drop_count = 0``
    falls back to :func:`householder_solve`.

    Returns
    -------
    x : XReal
    retained_condition : XReal
        Ratio of the largest to the smallest retained eigenvalue.
    """
    M = M if isinstance(M, XReal) else XReal(M)
    b = b if isinstance(b, XReal) else XReal(b)
    n = M.shape[0]
    if int(drop_count) != drop_count or drop_count < 0:
        raise ContractError(f"drop_count must be a non-negative integer, got {drop_count}")
    drop = int(drop_count) * int(pair_size)
    if drop >= n:
        raise ContractError(f"cannot drop {drop} of {n} eigenvalues")
    if spectrum is None:
        spectrum = jacobi_eigen(M)
    if drop == 0:
        return householder_solve(M, b), spectrum.condition_number
    keep = n - drop
    lam = spectrum.eigenvalues[:keep]
    Vk = spectrum.eigenvectors[:, :keep]
    coef = xsum(Vk * b.reshape(-1, 1), axis=0) / lam
    x = xsum(Vk * coef.reshape(1, -1), axis=1)
    return x, condition_of(lam)


# ---------------------------------------------------------------------------
# Gram systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GramSystem:
    """Normal equations ``T mu = A`` and their real symmetric form.

    For real (energy-norm) problems ``realT`` is ``Re T`` itself and the
    unknowns are real; otherwise ``realT`` is the 2N x 2N embedding.
    """

    T: XComplex
    A: XComplex
    realT: XReal
    realA: XReal
    is_real: bool = False

    @classmethod
    def build(cls, T, A, is_real=False):
        if is_real:
            realT, realA = T.re.copy(), A.re.copy()
            if _max_abs(realT - realT.T) > 1e-20 * float(frobenius(realT).hi):
                raise ContractError("matrix is not symmetric")
            return cls(T, A, realT, realA, True)
        realT, realA = embed_real(T, A)
        return cls(T, A, realT, realA, False)

    @property
    def size(self):
        return self.T.shape[0]

    @property
    def pair_size(self):
        return 1 if self.is_real else 2

    def rounded(self):
        """Copy with every entry rounded to float64 (reference-pipeline assembly)."""
        def r(x):
            return XReal(x.hi.copy())
        T = XComplex(r(self.T.re), r(self.T.im))
        A = XComplex(r(self.A.re), r(self.A.im))
        return GramSystem(T, A, r(self.realT), r(self.realA), self.is_real)

    def spectrum(self):
        return jacobi_eigen(self.realT)

    def solve(self, drop_count=0, spectrum: Optional[Spectrum] = None):
        """Coefficients ``mu`` (XComplex) and the retained condition number."""
        x, cond = truncated_solve(self.realT, self.realA, drop_count, spectrum, self.pair_size)
        if self.is_real:
            return XComplex(x, XReal.zeros(x.shape)), cond
        return unembed(x), cond

    def residual(self, mu):
        """``T mu - A`` in double-double."""
        prod = xsum(self.T * mu.reshape(1, -1), axis=1)
        return prod - self.A
