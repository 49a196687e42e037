import math

import numpy as np
import pytest

from unclab.errors import DomainError, QuadratureEvaluationError
from unclab.quadrature import (
    GAUSS_WEIGHTS,
    KRONROD_WEIGHTS,
    NODES,
    QuadratureConfig,
    integrate,
    integrate_oscillatory,
)

INF = math.inf


def test_exponential_second_moment():
    r = integrate(lambda x: np.exp(-2 * np.abs(x)) * x * x, (-INF, INF), [0.0])
    assert r.converged
    # <x^2> = alpha * integral = 1/2 at alpha = 1, so the integral itself is 1/2
    assert r.value == pytest.approx(0.5, abs=1e-13)


def test_triangle_second_moment():
    r = integrate(lambda x: 1.5 * x * x * (1 - np.abs(x)) ** 2, (-1.0, 1.0), [0.0])
    assert r.value == pytest.approx(0.1, abs=1e-14)


def test_odd_integrand_vanishes():
    cfg = QuadratureConfig()
    r = integrate(lambda x: np.exp(-2 * np.abs(x)) * np.sign(x), (-INF, INF), [0.0], cfg)
    assert abs(r.value) <= cfg.abs_tol


@pytest.mark.parametrize("degree", range(0, 24))
def test_single_panel_exactness(degree):
    # The Kronrod extension of 7-point Gauss integrates x^n exactly for n <= 23.
    exact = 0.0 if degree % 2 else 2.0 / (degree + 1)
    assert float(KRONROD_WEIGHTS @ NODES ** degree) == pytest.approx(exact, abs=1e-15)


def test_gauss_subset_degree_13():
    exact = 2.0 / 13
    assert float(GAUSS_WEIGHTS @ NODES ** 12) == pytest.approx(exact, abs=1e-15)


def test_degree_28_by_adaptivity():
    rng = np.random.default_rng(7)
    coeffs = rng.normal(size=29)
    poly = np.polynomial.Polynomial(coeffs)
    anti = poly.integ()
    r = integrate(poly, (-1.3, 2.1))
    assert r.converged
    exact = anti(2.1) - anti(-1.3)
    assert r.value == pytest.approx(exact, rel=1e-13, abs=1e-13)


def test_breakpoint_honoring():
    with_bp = integrate(np.abs, (-1.0, 1.0), [0.0])
    without = integrate(np.abs, (-1.0, 1.0))
    assert with_bp.value == pytest.approx(1.0, abs=1e-15)
    assert without.value == pytest.approx(1.0, abs=1e-13)
    assert with_bp.subdivisions_used <= 2
    assert without.subdivisions_used > with_bp.subdivisions_used


@pytest.mark.parametrize("kind", ["algebraic", "double_exponential"])
def test_infinite_maps(kind):
    r = integrate(lambda x: np.exp(-x * x), (-INF, INF), cfg=QuadratureConfig(infinite_map=kind))
    assert r.value == pytest.approx(math.sqrt(math.pi), abs=1e-12)


@pytest.mark.parametrize("kind", ["algebraic", "double_exponential"])
def test_semi_infinite(kind):
    cfg = QuadratureConfig(infinite_map=kind)
    assert integrate(lambda x: np.exp(-x), (0.0, INF), cfg=cfg).value == pytest.approx(1.0, abs=1e-12)
    assert integrate(lambda x: np.exp(x), (-INF, 0.0), cfg=cfg).value == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("p", [0.0, 1.0, 5.0, 20.0])
def test_oscillatory_exponential(p):
    r = integrate_oscillatory(lambda x: np.exp(-np.abs(x)), p, (-INF, INF), [0.0])
    assert abs(r.value - 2 / (1 + p * p)) <= 1e-9


def test_oscillatory_gaussian_at_zero():
    g = lambda x: np.exp(-x * x / 2) / math.pi ** 0.25
    r = integrate_oscillatory(g, 0.0, (-INF, INF))
    assert r.value.real / math.sqrt(2 * math.pi) == pytest.approx(math.pi ** -0.25, abs=1e-13)


def test_oscillatory_triangle_zero():
    g = lambda x: math.sqrt(1.5) * (1 - np.abs(x))
    r = integrate_oscillatory(g, 2 * math.pi, (-1.0, 1.0), [0.0])
    assert abs(r.value) <= 1e-13


@pytest.mark.parametrize("p", [0.3, 2.0, 17.0, 120.0])
def test_even_function_has_no_imaginary_part(p):
    cfg = QuadratureConfig()
    r = integrate_oscillatory(lambda x: 1 / np.cosh(x), p, (-INF, INF), cfg=cfg)
    assert abs(r.value.imag) <= cfg.abs_tol


def test_oscillatory_slow_tail():
    # Lorentzian: int e^{-ipx}/(1+x^2) dx = pi e^{-|p|}
    r = integrate_oscillatory(lambda x: 1 / (1 + x * x), 2.0, (-INF, INF))
    assert r.value.real == pytest.approx(math.pi * math.exp(-2.0), abs=1e-9)


def test_nan_reports_abscissa():
    with pytest.raises(QuadratureEvaluationError) as info:
        integrate(lambda x: np.where(x > 0.5, np.nan, x), (0.0, 1.0))
    assert info.value.abscissa > 0.5


def test_breakpoint_outside_domain():
    with pytest.raises(DomainError):
        integrate(np.abs, (-1.0, 1.0), [2.0])


def test_nonfinite_frequency():
    with pytest.raises(DomainError):
        integrate_oscillatory(np.abs, math.nan, (-1.0, 1.0))


def test_nonconvergence_is_flagged():
    cfg = QuadratureConfig(max_subdivisions=8)
    r = integrate(lambda x: np.sin(1 / x), (1e-6, 1.0), cfg=cfg)
    assert not r.converged
    assert math.isfinite(r.value)


def test_converged_error_within_tolerance():
    cfg = QuadratureConfig()
    r = integrate(lambda x: np.exp(-x * x) * np.cos(3 * x), (-INF, INF), cfg=cfg)
    assert r.converged and r.est_error <= max(cfg.abs_tol, cfg.rel_tol * abs(r.value))


@pytest.mark.parametrize("kw", [dict(rel_tol=0), dict(abs_tol=-1), dict(max_subdivisions=4),
                                dict(infinite_map="tanh")])
def test_config_validation(kw):
    with pytest.raises((ValueError, DomainError)):
        QuadratureConfig(**kw)
