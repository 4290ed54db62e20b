"""Model inputs: mass profile m(x), potential V(x), PT parameters, grids.

The model Hamiltonian is

    H = p (1/m) p - (1/2m) p m p (1/m) + V(x) + i (beta1 p x + beta2 x p)

with real beta1, beta2, even positive m(x) and even real V(x).  Only this
real, even branch is supported: it is the one for which all the closed forms
downstream hold, and it guarantees PT symmetry.  H is Hermitian iff
beta1 = -beta2.

``make_profile`` is the single validating constructor: it enforces parity,
positivity of the mass, and consistency of the supplied analytic derivatives
against finite differences on a validation grid.  All profile callables must
accept numpy arrays.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    ConfigError,
    DerivativeMismatch,
    DomainError,
    NonPositiveMass,
    ParityViolation,
    ValidationError,
)
from .fd import fd1

__all__ = [
    "PTParameters",
    "MassProfile",
    "PotentialProfile",
    "Profile",
    "GridSpec",
    "DEFAULT_GRID",
    "make_profile",
    "is_hermitian",
    "constant_mass",
    "rational_mass",
    "table_mass",
    "harmonic_potential",
    "zero_potential",
    "table_potential",
    "ho_profile",
    "profile_from_config",
    "load_config",
]

HERMITIAN_TOL = 1e-14
PARITY_RTOL = 1e-12
DERIVATIVE_RTOL = 1e-6


@dataclass(frozen=True)
class PTParameters:
    """Real PT parameters beta1, beta2 (frequency units) and hbar > 0."""

    beta1: float
    beta2: float
    hbar: float

    def __post_init__(self):
        for name in ("beta1", "beta2", "hbar"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValidationError(f"{name} must be a finite real number")
        if self.hbar <= 0:
            raise ValidationError("hbar must be positive")

    @property
    def sigma(self):
        """beta1 + beta2, the non-Hermiticity strength."""
        return self.beta1 + self.beta2

    @property
    def hermitian(self):
        return abs(self.beta1 + self.beta2) <= HERMITIAN_TOL


@dataclass(frozen=True)
class MassProfile:
    """Positive even mass with analytic first and second derivatives."""

    m: Callable
    m_prime: Callable
    m_double_prime: Callable
    descriptor: str = "custom"


@dataclass(frozen=True)
class PotentialProfile:
    """Even real potential with analytic first derivative."""

    V: Callable
    V_prime: Callable
    descriptor: str = "custom"


@dataclass(frozen=True)
class GridSpec:
    """Symmetric uniform grid on [-L, L] with an odd number of nodes.

    N odd keeps x=0 on the grid, and nodes are built as (k - (N-1)/2)*h so
    that x[N-1-k] == -x[k] exactly in floating point.
    """

    L: float
    N: int

    def __post_init__(self):
        if not (np.isfinite(self.L) and self.L > 0):
            raise ValidationError("grid half-width L must be positive")
        if self.N < 3 or self.N % 2 == 0:
            raise ValidationError("grid point count N must be odd and >= 3")

    @property
    def h(self):
        return 2.0 * self.L / (self.N - 1)

    @property
    def mid(self):
        """Index of the x=0 node."""
        return (self.N - 1) // 2

    def nodes(self):
        return (np.arange(self.N) - self.mid) * self.h


DEFAULT_GRID = GridSpec(L=8.0, N=2001)


@dataclass(frozen=True)
class Profile:
    """Validated bundle of PT parameters, mass and potential."""

    params: PTParameters
    mass: MassProfile
    potential: PotentialProfile


def _check_parity(values, flipped, what):
    scale = np.maximum(np.abs(values), np.abs(flipped))
    bad = np.abs(values - flipped) > PARITY_RTOL * scale
    if np.any(bad):
        raise ParityViolation(f"{what} is not even within relative {PARITY_RTOL:g}")


def _check_derivative(values, supplied, grid, what):
    # 4th-order FD of the sampled function vs the supplied analytic derivative,
    # away from boundary stencils.  The tolerance scale mixes the derivative's
    # own magnitude with the function scale over the half-width so that a zero
    # derivative (constant profile) is still testable.
    fd = fd1(values, grid.h)
    interior = slice(2, -2)
    err = np.max(np.abs(fd[interior] - supplied[interior]))
    scale = max(np.max(np.abs(supplied)), np.max(np.abs(values)) / grid.L, 1e-300)
    if err > DERIVATIVE_RTOL * scale:
        raise DerivativeMismatch(
            f"supplied {what} differs from finite differences by {err:.3e} "
            f"(allowed {DERIVATIVE_RTOL * scale:.3e})"
        )


def make_profile(mass, potential, params, validation_grid=DEFAULT_GRID):
    """Validate and assemble a Profile.

    Checks, on the validation grid:
      * m finite and strictly positive (NonPositiveMass),
      * m and V even within relative 1e-12 (ParityViolation),
      * m', m'' and V' consistent with finite differences of the sampled
        functions within relative 1e-6 (DerivativeMismatch).
    """
    x = validation_grid.nodes()
    m_vals = np.asarray(mass.m(x), dtype=float)
    if not np.all(np.isfinite(m_vals)):
        raise NonPositiveMass("mass evaluates to a non-finite value on the grid")
    if np.any(m_vals <= 0):
        raise NonPositiveMass("mass must be strictly positive on the grid")
    v_vals = np.asarray(potential.V(x), dtype=float)
    if not np.all(np.isfinite(v_vals)):
        raise ValidationError("potential evaluates to a non-finite value on the grid")

    _check_parity(m_vals, m_vals[::-1], "mass")
    _check_parity(v_vals, v_vals[::-1], "potential")

    mp_vals = np.asarray(mass.m_prime(x), dtype=float)
    mpp_vals = np.asarray(mass.m_double_prime(x), dtype=float)
    vp_vals = np.asarray(potential.V_prime(x), dtype=float)
    _check_derivative(m_vals, mp_vals, validation_grid, "m'")
    _check_derivative(mp_vals, mpp_vals, validation_grid, "m''")
    _check_derivative(v_vals, vp_vals, validation_grid, "V'")

    return Profile(params=params, mass=mass, potential=potential)


def is_hermitian(profile):
    """True iff beta1 + beta2 == 0 within absolute tolerance 1e-14."""
    return profile.params.hermitian


# ---------------------------------------------------------------------------
# profile factories


def constant_mass(m0=1.0):
    m0 = float(m0)
    if m0 <= 0:
        raise ValidationError("constant mass must be positive")
    return MassProfile(
        m=lambda x: np.full_like(np.asarray(x, dtype=float), m0),
        m_prime=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        m_double_prime=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        descriptor="constant",
    )


def rational_mass(m0=1.0, c=1.0):
    """m(x) = m0 / (1 + c x^2), an even positive profile for m0 > 0, c >= 0."""
    m0 = float(m0)
    c = float(c)

    def m(x):
        return m0 / (1.0 + c * x * x)

    def m_prime(x):
        d = 1.0 + c * x * x
        return -2.0 * m0 * c * x / (d * d)

    def m_double_prime(x):
        d = 1.0 + c * x * x
        return m0 * c * (6.0 * c * x * x - 2.0) / (d * d * d)

    return MassProfile(m=m, m_prime=m_prime, m_double_prime=m_double_prime,
                       descriptor="rational")


def table_mass(xs, ms):
    """Cubic-spline mass from tabulated samples (dense, even tables expected)."""
    from scipy.interpolate import CubicSpline

    spline = CubicSpline(np.asarray(xs, dtype=float), np.asarray(ms, dtype=float))
    return MassProfile(
        m=spline,
        m_prime=spline.derivative(1),
        m_double_prime=spline.derivative(2),
        descriptor="table",
    )


def harmonic_potential(omega, m0=1.0):
    """V(x) = (1/2) m0 omega^2 x^2."""
    k = 0.5 * float(m0) * float(omega) ** 2

    def V(x):
        return k * x * x

    def V_prime(x):
        return 2.0 * k * x

    return PotentialProfile(V=V, V_prime=V_prime, descriptor="harmonic")


def zero_potential():
    return PotentialProfile(
        V=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        V_prime=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        descriptor="zero",
    )


def table_potential(xs, vs):
    from scipy.interpolate import CubicSpline

    spline = CubicSpline(np.asarray(xs, dtype=float), np.asarray(vs, dtype=float))
    return PotentialProfile(V=spline, V_prime=spline.derivative(1),
                            descriptor="table")


def ho_profile(beta2, m=1.0, hbar=1.0, validation_grid=DEFAULT_GRID):
    """The constant-mass harmonic-oscillator case family.

    beta1 = -1, omega^2 = 4*beta2 >= 0.  This is the one-parameter family on
    which every closed form in the package is exercised.
    """
    if beta2 < 0:
        raise DomainError("the oscillator family requires beta2 >= 0")
    params = PTParameters(beta1=-1.0, beta2=float(beta2), hbar=float(hbar))
    omega = 2.0 * np.sqrt(float(beta2))
    return make_profile(
        constant_mass(m),
        harmonic_potential(omega, m0=m),
        params,
        validation_grid=validation_grid,
    )


# ---------------------------------------------------------------------------
# configuration files

_MASS_KINDS = ("constant", "rational", "table")
_POTENTIAL_KINDS = ("harmonic", "zero", "table")


def load_config(path):
    """Parse a YAML (or JSON) configuration file into a dict."""
    import yaml

    with open(path, "r", encoding="utf-8") as fh:
        try:
            cfg = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse config file {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config file must contain a mapping at top level")
    return cfg


def _section(cfg, key):
    section = cfg.get(key)
    if not isinstance(section, dict) or "kind" not in section:
        raise ConfigError(f"config section '{key}' must be a mapping with a 'kind'")
    return section["kind"], section.get("params", {}) or {}


def profile_from_config(cfg):
    """Build (Profile, GridSpec) from a configuration mapping.

    Schema::

        mass:      {kind: constant|rational|table, params: {...}}
        potential: {kind: harmonic|zero|table,     params: {...}}
        beta1: <real>        beta2: <real>       hbar: <real>
        grid:      {L: <real>, N: <odd int>}
    """
    kind, params = _section(cfg, "mass")
    if kind == "constant":
        mass = constant_mass(params.get("m0", 1.0))
    elif kind == "rational":
        mass = rational_mass(params.get("m0", 1.0), params.get("c", 1.0))
    elif kind == "table":
        try:
            mass = table_mass(params["x"], params["m"])
        except KeyError as exc:
            raise ConfigError(f"table mass needs 'x' and 'm' arrays: missing {exc}")
    else:
        raise ConfigError(f"unknown mass kind '{kind}' (expected {_MASS_KINDS})")

    kind, params = _section(cfg, "potential")
    if kind == "harmonic":
        potential = harmonic_potential(params.get("omega", 1.0),
                                       params.get("m0", 1.0))
    elif kind == "zero":
        potential = zero_potential()
    elif kind == "table":
        try:
            potential = table_potential(params["x"], params["V"])
        except KeyError as exc:
            raise ConfigError(f"table potential needs 'x' and 'V' arrays: missing {exc}")
    else:
        raise ConfigError(
            f"unknown potential kind '{kind}' (expected {_POTENTIAL_KINDS})")

    try:
        pt = PTParameters(beta1=float(cfg["beta1"]), beta2=float(cfg["beta2"]),
                          hbar=float(cfg.get("hbar", 1.0)))
    except KeyError as exc:
        raise ConfigError(f"config is missing required key {exc}")

    grid_cfg = cfg.get("grid", {}) or {}
    grid = GridSpec(L=float(grid_cfg.get("L", DEFAULT_GRID.L)),
                    N=int(grid_cfg.get("N", DEFAULT_GRID.N)))

    return make_profile(mass, potential, pt, validation_grid=grid), grid
