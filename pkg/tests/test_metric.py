"""Metric weight construction and the weighted inner product."""
import numpy as np
import pytest

import ptpdem as pt
import pipelines


def _profile(b1, b2, mass=None, hbar=1.0):
    return pt.make_profile(mass or pt.constant_mass(1.0), pt.zero_potential(),
                           pt.PTParameters(beta1=b1, beta2=b2, hbar=hbar))


# ------------------------------------------------------------------ lambda_of

def test_lambda_closed_values():
    # constant m = 1, sigma = -1: Lambda(1) = -2*(-1)*int_0^1 y dy = +1
    assert pt.lambda_of(_profile(-1.0, 0.0), 1.0) == pytest.approx(1.0, abs=1e-10)
    # Hermitian prefactor vanishes identically
    assert pt.lambda_of(_profile(-1.0, 1.0), 3.7) == 0.0
    # m = 1/(1+x^2), sigma = 1: Lambda(1) = -2 int_0^1 y/(1+y^2) dy = -ln 2
    rational = _profile(1.0, 0.0, mass=pt.rational_mass(1.0, 1.0))
    assert pt.lambda_of(rational, 1.0) == pytest.approx(-np.log(2.0), abs=1e-10)


# ---------------------------------------------------------------- build_metric

def test_metric_invariants_and_constant_mass_closed_form():
    g = pipelines.grid()
    profile = _profile(-1.0, 0.0)
    metric = pt.build_metric(profile, g)
    xs = np.linspace(-g.L, g.L, g.N)
    assert np.array_equal(metric.eta_samples, np.exp(metric.lambda_samples))
    assert metric.lambda_samples[g.N // 2] == 0.0  # Lambda(0) = 0
    # sigma = -1, m = 1: Lambda = -sigma m x^2 / hbar = +x^2
    assert np.max(np.abs(metric.lambda_samples - xs ** 2)) < 1e-10


def test_metric_hermitian_is_flat():
    metric = pt.build_metric(_profile(-2.0, 2.0), pipelines.grid())
    assert np.all(metric.lambda_samples == 0.0)
    assert np.all(metric.eta_samples == 1.0)


def test_metric_growing_branch():
    # sigma = +1: Lambda = -x^2, eta decays
    metric = pt.build_metric(_profile(1.0, 0.0), pipelines.grid())
    assert metric.eta_samples[0] == pytest.approx(np.exp(-64.0), rel=1e-8)


# --------------------------------------------------------------- inner_product

def test_inner_product_normalized_gaussian_flat():
    g = pipelines.grid()
    xs = np.linspace(-g.L, g.L, g.N)
    metric = pt.build_metric(_profile(-1.0, 0.0), g)
    f = np.pi ** -0.25 * np.exp(-xs ** 2 / 2.0)
    assert pt.inner_product(f, f, metric, "flat") == pytest.approx(1.0, abs=1e-10)


def test_inner_product_eta_weighted_gaussian():
    # f = e^{-x^2} with eta = e^{+x^2}: integrand e^{-x^2}, value sqrt(pi)
    g = pipelines.grid()
    xs = np.linspace(-g.L, g.L, g.N)
    metric = pt.build_metric(_profile(-1.0, 0.0), g)
    f = np.exp(-xs ** 2)
    val = pt.inner_product(f, f, metric, "eta")
    assert val == pytest.approx(np.sqrt(np.pi), abs=1e-10)


def test_inner_product_parity_orthogonality():
    g = pipelines.grid()
    xs = np.linspace(-g.L, g.L, g.N)
    metric = pt.build_metric(_profile(-1.0, 0.0), g)
    odd = xs * np.exp(-xs ** 2)
    even = np.exp(-xs ** 2)
    assert abs(pt.inner_product(odd, even, metric, "eta")) < 1e-10


def test_inner_product_conjugate_symmetry_and_linearity():
    g = pipelines.grid()
    xs = np.linspace(-g.L, g.L, g.N)
    metric = pt.build_metric(_profile(-1.0, 0.0), g)
    f = np.exp(-xs ** 2) * (1.0 + 0.5j * xs)
    h = np.exp(-xs ** 2 / 2.0) * (xs - 0.25j)
    ip = lambda a, b: pt.inner_product(a, b, metric, "eta")
    assert ip(f, h) == pytest.approx(np.conj(ip(h, f)), abs=1e-12)
    assert ip(f, f).real > 0.0
    a, b = 0.7 - 0.2j, 1.3 + 0.9j
    lhs = ip(f, a * h + b * f)
    rhs = a * ip(f, h) + b * ip(f, f)
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_inner_product_grid_mismatch():
    g = pipelines.grid()
    metric = pt.build_metric(_profile(-1.0, 0.0), g)
    with pytest.raises(pt.GridMismatch):
        pt.inner_product(np.ones(g.N - 1), np.ones(g.N), metric, "flat")


# ----------------------------------------------------------------- quadrature

def test_adaptive_integral_known_values():
    assert pt.adaptive_integral(lambda x: np.exp(-x * x), -8.0, 8.0) == \
        pytest.approx(np.sqrt(np.pi), abs=1e-12)
    assert pt.adaptive_integral(np.cos, 0.0, np.pi / 2.0) == \
        pytest.approx(1.0, abs=1e-12)


def test_adaptive_integral_depth_exhaustion():
    settings = pt.QuadratureSettings(abs_tol=1e-15, rel_tol=1e-15,
                                     max_refinement_depth=2)
    with pytest.raises(pt.QuadratureNonConvergence):
        pt.adaptive_integral(lambda x: np.sqrt(np.abs(x)), -1.0, 1.0, settings)


def test_cumulative_from_zero_matches_antiderivative():
    g = pt.GridSpec(L=2.0, N=401)
    xs = np.linspace(-g.L, g.L, g.N)
    samples = pt.cumulative_from_zero(lambda x: np.cos(x), g)
    assert np.max(np.abs(samples - np.sin(xs))) < 1e-10
    assert samples[g.N // 2] == 0.0
