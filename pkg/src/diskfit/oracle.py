"""Brute-force quadrature of the inner products, in float64.

These routines share no code with the closed forms in :mod:`diskfit.kernels`
and exist to validate them.  Angular integrals use the trapezoid rule (which
is spectrally accurate for periodic integrands); radial integrals over the
unbounded exterior are mapped to a finite interval and done by
Gauss-Legendre quadrature.
"""

from __future__ import annotations

import numpy as np

from diskfit.errors import AdmissibilityError
from diskfit.model import Geometry
from diskfit.scalars import XComplex, XReal

__all__ = [
    "sigma_ip_quadrature",
    "dirichlet_ip_quadrature",
    "energy_ip_quadrature",
    "bergman_ip_quadrature",
    "wirtinger_identity_check",
    "N_THETA",
    "N_R",
]

N_THETA = 4096
N_R = 256
FD_STEP = 1e-6


def _c(value):
    """Coerce a callable's output to a complex128 array."""
    if isinstance(value, XComplex):
        return value.to_complex()
    if isinstance(value, XReal):
        return value.to_float().astype(complex)
    return np.asarray(value, dtype=complex)


def _r(value):
    if isinstance(value, XReal):
        return value.to_float()
    if isinstance(value, XComplex):
        return value.re.to_float()
    return np.asarray(value, dtype=float)


def _angles(n_theta):
    return 2.0 * np.pi * np.arange(n_theta) / n_theta


def _gauss(n):
    """Gauss-Legendre nodes and weights on (0, 1)."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def sigma_ip_quadrature(f, g, n_points=N_THETA):
    """``(1/2pi) int conj(f) g dtheta`` on the unit circle (trapezoid rule)."""
    z = np.exp(1j * _angles(n_points))
    return complex(np.mean(np.conj(_c(f(z))) * _c(g(z))))


def _radial_mean(integrand, n_theta, radii):
    """Angular mean of ``integrand(z)`` and of its modulus on each radius."""
    z = radii[:, None] * np.exp(1j * _angles(n_theta))[None, :]
    vals = integrand(z)
    return np.mean(vals, axis=1), np.mean(np.abs(vals), axis=1)


def _check_decay(u, sizes):
    """Reject integrands that blow up in the mapped variable ``u = 1/r``.

    Admissible integrands fall off like ``r^-4``, i.e. vanish like ``u`` after
    the Jacobian ``u^-3``; growth toward ``u = 0`` signals divergence.
    """
    mapped = sizes / u ** 3
    ref = np.max(mapped[u >= 0.25], initial=0.0)
    if mapped[0] > 10.0 * ref and mapped[0] > mapped[min(2, len(mapped) - 1)]:
        raise AdmissibilityError("integrand does not decay like r^-4; the inner product diverges")


def _area_integral(integrand, geometry, n_r, n_theta, check=True):
    """``(1/2pi) iint integrand dA`` over the field region of ``geometry``."""
    geometry = Geometry(geometry)
    nodes, weights = _gauss(n_r)
    if geometry is Geometry.EXTERIOR:
        # u = 1/r: r dr = du / u^3
        order = np.argsort(nodes)
        u = nodes[order]
        w = weights[order]
        radii = 1.0 / u
        means, sizes = _radial_mean(integrand, n_theta, radii)
        if check:
            _check_decay(u, sizes)
        return np.sum(w * means / u ** 3)
    means, _ = _radial_mean(integrand, n_theta, nodes)
    return np.sum(weights * means * nodes)


def dirichlet_ip_quadrature(f_z, g_z, geometry=Geometry.EXTERIOR, n_r=N_R, n_theta=N_THETA):
    """``(1/2pi) iint conj(f_z) g_z dA`` over the field region.

    Parameters
    ----------
    f_z, g_z : callable
        Derivatives of the two functions, evaluated on complex arrays.
    geometry : Geometry
        Exterior integrates over ``|z| >= 1`` through ``u = 1/r``; interior
        over ``|z| <= 1``.
    """
    def integrand(z):
        return np.conj(_c(f_z(z))) * _c(g_z(z))

    return complex(_area_integral(integrand, geometry, n_r, n_theta))


def _fd_gradient(G, x, y, h=FD_STEP):
    gx = (_r(G(x + h, y)) - _r(G(x - h, y))) / (2 * h)
    gy = (_r(G(x, y + h)) - _r(G(x, y - h))) / (2 * h)
    return gx, gy


def energy_ip_quadrature(G, H, n_r=N_R, n_theta=N_THETA, grad_G=None, grad_H=None):
    """``(1/2pi) iint grad G . grad H dA`` over the exterior of the unit disk.

    ``G`` and ``H`` are real functions of ``(x, y)``.  Gradients come from
    central differences (step ``1e-6``) unless ``grad_G``/``grad_H`` supply
    them as callables returning ``(d/dx, d/dy)``.
    """
    def integrand(z):
        x, y = z.real, z.imag
        gx, gy = grad_G(x, y) if grad_G else _fd_gradient(G, x, y)
        hx, hy = grad_H(x, y) if grad_H else _fd_gradient(H, x, y)
        return _r(gx) * _r(hx) + _r(gy) * _r(hy)

    return float(np.real(_area_integral(integrand, Geometry.EXTERIOR, n_r, n_theta)))


def bergman_ip_quadrature(fp, gp, geometry=Geometry.EXTERIOR, n_r=N_R, n_theta=N_THETA):
    """Area inner product of two functions divided by ``2 pi``.

    This is a second, independent route to the Dirichlet product when
    ``fp``/``gp`` are derivatives: the radial variable is ``v = 1/r^2`` on the
    exterior (``r dr = dv / (2 v^2)``) and ``v = r^2`` on the interior.
    """
    geometry = Geometry(geometry)
    nodes, weights = _gauss(n_r)
    theta = _angles(n_theta)
    if geometry is Geometry.EXTERIOR:
        radii = 1.0 / np.sqrt(nodes)
        jac = 0.5 / nodes ** 2
    else:
        radii = np.sqrt(nodes)
        jac = np.full_like(nodes, 0.5)
    z = radii[:, None] * np.exp(1j * theta)[None, :]
    vals = np.conj(_c(fp(z))) * _c(gp(z))
    return complex(np.sum(weights * jac * np.mean(vals, axis=1)))


def wirtinger_identity_check(f, points, g=None, h=1e-5):
    """Largest pointwise gap between the gradient and Wirtinger integrands.

    ``f(z, zbar)`` (and ``g``, default ``f``) take ``z`` and ``zbar`` as
    independent arguments.  The gradient form
    ``(conj(f_x) g_x + conj(f_y) g_y) / 2`` is built from x/y central
    differences, the Wirtinger form ``conj(f_z) g_z + conj(f_zbar) g_zbar``
    from separate ``z`` and ``zbar`` differences.
    """
    g = f if g is None else g
    z = np.asarray(points, dtype=complex)
    zb = np.conj(z)

    def d_x(fn):
        return (fn(z + h, zb + h) - fn(z - h, zb - h)) / (2 * h)

    def d_y(fn):
        return (fn(z + 1j * h, zb - 1j * h) - fn(z - 1j * h, zb + 1j * h)) / (2 * h)

    def d_z(fn):
        return (fn(z + h, zb) - fn(z - h, zb)) / (2 * h)

    def d_zb(fn):
        return (fn(z, zb + h) - fn(z, zb - h)) / (2 * h)

    grad_form = 0.5 * (np.conj(d_x(f)) * d_x(g) + np.conj(d_y(f)) * d_y(g))
    wirt_form = np.conj(d_z(f)) * d_z(g) + np.conj(d_zb(f)) * d_zb(g)
    return float(np.max(np.abs(grad_form - wirt_form)))
