"""Profile construction, validation, and configuration parsing."""
import numpy as np
import pytest
from hypothesis import given, strategies as st

import ptpdem as pt
import pipelines


# ---------------------------------------------------------------- validation

def test_demo_oscillator_profile_is_valid():
    # m = 1, V = (1/2) * 4 x^2 (omega = 2), beta1 = -1, beta2 = 1
    profile = pt.make_profile(pt.constant_mass(1.0),
                              pt.harmonic_potential(2.0),
                              pt.PTParameters(beta1=-1.0, beta2=1.0, hbar=1.0))
    assert profile.mass.m(0.3) == 1.0
    assert profile.potential.V(0.5) == pytest.approx(0.5)


def test_rational_mass_profile_is_valid():
    profile = pt.make_profile(pt.rational_mass(1.0, 1.0), pt.zero_potential(),
                              pt.PTParameters(beta1=1.0, beta2=0.0, hbar=1.0))
    assert profile.mass.m(2.0) == pytest.approx(0.2)


def test_odd_potential_rejected():
    xs = np.linspace(-9.0, 9.0, 721)
    with pytest.raises(pt.ParityViolation):
        pt.make_profile(pt.constant_mass(1.0), pt.table_potential(xs, xs),
                        pt.PTParameters(beta1=-1.0, beta2=0.0, hbar=1.0))


def test_nonpositive_mass_rejected():
    # the constant-mass factory guards its argument directly
    with pytest.raises(pt.ValidationError):
        pt.constant_mass(-1.0)
    # dense enough that the spline-derivative cross-check passes first
    xs = np.linspace(-9.0, 9.0, 36001)
    dipping = 1.0 - 1.5 * np.exp(-xs ** 2)  # even, but negative near 0
    with pytest.raises(pt.NonPositiveMass):
        pt.make_profile(pt.table_mass(xs, dipping), pt.zero_potential(),
                        pt.PTParameters(beta1=-1.0, beta2=0.0, hbar=1.0))


def test_wrong_analytic_derivative_rejected():
    # even mass whose claimed m' disagrees with the finite-difference probe
    lying = pt.MassProfile(
        m=lambda x: 1.0 + np.asarray(x) ** 2,
        m_prime=lambda x: 3.0 * np.asarray(x),          # truth is 2x
        m_double_prime=lambda x: np.full_like(np.asarray(x, dtype=float), 2.0),
        descriptor="lying-quadratic",
    )
    with pytest.raises(pt.DerivativeMismatch):
        pt.make_profile(lying, pt.zero_potential(),
                        pt.PTParameters(beta1=-1.0, beta2=0.0, hbar=1.0))


def test_profile_evenness_sampled_at_random_points():
    rng = np.random.default_rng(11)
    xs = rng.uniform(0.0, 8.0, size=64)
    for profile in (pipelines.demo_profile(0.5), pipelines.pdem_profile()):
        m, V = profile.mass.m, profile.potential.V
        assert np.max(np.abs(np.asarray(m(xs)) - np.asarray(m(-xs)))) < 1e-12
        assert np.max(np.abs(np.asarray(V(xs)) - np.asarray(V(-xs)))) < 1e-12


# ---------------------------------------------------------------- Hermiticity

def test_is_hermitian_examples():
    mk = lambda b1, b2: pt.make_profile(
        pt.constant_mass(1.0), pt.zero_potential(),
        pt.PTParameters(beta1=b1, beta2=b2, hbar=1.0))
    assert pt.is_hermitian(mk(-1.0, 1.0)) is True
    assert pt.is_hermitian(mk(-1.0, 0.0)) is False
    assert pt.is_hermitian(mk(0.0, 0.0)) is True
    # 1e-14 window on beta1 + beta2
    assert pt.is_hermitian(mk(-1.0, 1.0 + 5e-15)) is True
    assert pt.is_hermitian(mk(-1.0, 1.0 + 1e-12)) is False


@given(b1=st.floats(min_value=-3, max_value=3),
       b2=st.floats(min_value=-3, max_value=3))
def test_is_hermitian_swap_invariant(b1, b2):
    mk = lambda x, y: pt.make_profile(
        pt.constant_mass(1.0), pt.zero_potential(),
        pt.PTParameters(beta1=x, beta2=y, hbar=1.0))
    assert pt.is_hermitian(mk(b1, b2)) == pt.is_hermitian(mk(b2, b1))


# ---------------------------------------------------------------- config I/O

def _base_config():
    return {
        "mass": {"kind": "constant", "params": {"m0": 1.0}},
        "potential": {"kind": "harmonic", "params": {"omega": 2.0}},
        "beta1": -1.0,
        "beta2": 1.0,
        "hbar": 1.0,
        "grid": {"L": 6.0, "N": 1201},
    }


def test_profile_from_config_roundtrip():
    profile, grid = pt.profile_from_config(_base_config())
    assert grid == pt.GridSpec(L=6.0, N=1201)
    assert pt.is_hermitian(profile)
    assert profile.potential.V(1.0) == pytest.approx(2.0)


def test_profile_from_config_defaults_grid():
    cfg = _base_config()
    del cfg["grid"]
    _, grid = pt.profile_from_config(cfg)
    assert grid == pt.DEFAULT_GRID


def test_profile_from_config_errors():
    cfg = _base_config()
    cfg["mass"]["kind"] = "fractal"
    with pytest.raises(pt.ConfigError):
        pt.profile_from_config(cfg)

    cfg = _base_config()
    del cfg["beta1"]
    with pytest.raises(pt.ConfigError):
        pt.profile_from_config(cfg)

    cfg = _base_config()
    cfg["potential"] = {"kind": "table", "params": {"x": [0.0, 1.0]}}  # no V
    with pytest.raises(pt.ConfigError):
        pt.profile_from_config(cfg)


def test_load_config_yaml(tmp_path):
    path = tmp_path / "profile.yaml"
    path.write_text(
        "mass: {kind: constant, params: {m0: 1.0}}\n"
        "potential: {kind: zero}\n"
        "beta1: -1.0\nbeta2: 0.0\n"
    )
    cfg = pt.load_config(path)
    profile, grid = pt.profile_from_config(cfg)
    assert grid == pt.DEFAULT_GRID
    assert not pt.is_hermitian(profile)


def test_table_profiles_interpolate():
    xs = np.linspace(-9.0, 9.0, 36001)
    profile = pt.make_profile(
        pt.table_mass(xs, 1.0 / (1.0 + xs ** 2)),
        pt.table_potential(xs, 2.0 * xs ** 2),
        pt.PTParameters(beta1=-0.5, beta2=0.5, hbar=1.0))
    assert profile.mass.m(0.5) == pytest.approx(0.8, rel=1e-8)
    assert profile.potential.V(1.5) == pytest.approx(4.5, rel=1e-8)
