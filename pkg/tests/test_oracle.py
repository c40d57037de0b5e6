"""Float64 quadrature oracles on known closed forms."""

import math

import numpy as np
import pytest

from diskfit.errors import AdmissibilityError
from diskfit.model import Geometry
from diskfit.oracle import (
    bergman_ip_quadrature,
    dirichlet_ip_quadrature,
    energy_ip_quadrature,
    sigma_ip_quadrature,
    wirtinger_identity_check,
)


def test_sigma_inverse_z():
    assert sigma_ip_quadrature(lambda z: 1 / z, lambda z: 1 / z) == pytest.approx(1, abs=1e-14)
    assert abs(sigma_ip_quadrature(lambda z: 1 / z, lambda z: z ** -2)) < 1e-14


def test_sigma_pole():
    assert sigma_ip_quadrature(lambda z: 1 / (z - 0.6), lambda z: 1 / (z - 0.6)) == \
        pytest.approx(1.5625, rel=1e-12)


def test_dirichlet_inverse_z():
    value = dirichlet_ip_quadrature(lambda z: -z ** -2, lambda z: -z ** -2)
    assert value == pytest.approx(0.5, rel=1e-12)


def test_dirichlet_pole():
    value = dirichlet_ip_quadrature(lambda z: -(z - 0.6) ** -2, lambda z: -(z - 0.6) ** -2)
    assert value == pytest.approx(1.220703125, rel=1e-10)


def test_dirichlet_interior():
    value = dirichlet_ip_quadrature(lambda z: (2 - z) ** -2, lambda z: (2 - z) ** -2, Geometry.INTERIOR)
    assert value == pytest.approx(0.5 / 9, rel=1e-12)


def test_bergman_agrees_with_dirichlet():
    fp = lambda z: -(z - 0.6) ** -2  # noqa: E731
    assert bergman_ip_quadrature(fp, fp) == pytest.approx(1.220703125, rel=1e-10)
    gp = lambda z: (2 - z) ** -2  # noqa: E731
    assert bergman_ip_quadrature(gp, gp, Geometry.INTERIOR) == pytest.approx(0.5 / 9, rel=1e-12)


def test_energy_log():
    xk = 0.4

    def G(x, y):
        return np.log(np.hypot(x, y) / np.hypot(x - xk, y))

    assert energy_ip_quadrature(G, G) == pytest.approx(-0.5 * math.log(0.84), rel=1e-8)
    assert energy_ip_quadrature(G, G) == pytest.approx(0.0871766936, abs=1e-9)


def test_energy_orthogonal_parts():
    value = energy_ip_quadrature(lambda x, y: np.real(1 / (x + 1j * y)),
                                 lambda x, y: np.imag(1 / (x + 1j * y)))
    assert abs(value) < 1e-10


def test_energy_with_exact_gradients():
    def grad(x, y):
        r2 = x * x + y * y
        return (y * y - x * x) / r2 ** 2, -2 * x * y / r2 ** 2

    value = energy_ip_quadrature(None, None, grad_G=grad, grad_H=grad)
    assert value == pytest.approx(0.5, rel=1e-12)


def test_divergent_integrand():
    with pytest.raises(AdmissibilityError):
        dirichlet_ip_quadrature(lambda z: 1 / z, lambda z: 1 / z)


def test_wirtinger_identity():
    pts = 1.5 * np.exp(1j * np.random.default_rng(0).uniform(0, 2 * np.pi, 100))
    assert wirtinger_identity_check(lambda z, zb: 1 / z, pts) < 1e-8
    assert wirtinger_identity_check(lambda z, zb: zb, pts) < 1e-8
    assert wirtinger_identity_check(lambda z, zb: z + zb ** 2, pts) < 1e-8
