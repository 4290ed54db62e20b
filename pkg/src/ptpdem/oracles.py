"""Independent analytic oracles used to cross-check pipeline output.

These live in the shipped library, not in test code, so the CLI `verify`
stage can run the same cross-checks in the field.  Nothing here depends on
the modules it is meant to check, beyond the ladder package consumed by the
brute-force identity evaluator.
"""

import numpy as np

from .errors import DomainError, GridMismatch

__all__ = [
    "gaussian_moment",
    "hermite_gaussian_basket",
    "random_smooth_basket",
    "operator_identity_bruteforce",
    "IDENTITY_TAGS",
]


def gaussian_moment(c, k):
    """<x^k> for the density proportional to exp(-c x^2), c > 0.

    Odd moments vanish; even moments are (k-1)!! / (2c)^(k/2).
    """
    if not (np.isfinite(c) and c > 0):
        raise DomainError("gaussian_moment requires c > 0")
    k = int(k)
    if k < 0:
        raise DomainError("gaussian_moment requires k >= 0")
    if k % 2 == 1:
        return 0.0
    value = 1.0
    for j in range(1, k, 2):  # (k-1)!! = 1*3*...*(k-1)
        value *= j
    return value / (2.0 * c) ** (k // 2)


def hermite_gaussian_basket(grid, count=8):
    """Sup-normalized probes H_k(x) * exp(-x^2), k = 0..count-1.

    Smooth, rapidly decaying test functions for operator-identity residuals;
    the fixed exp(-x^2) envelope keeps them numerically dead at |x| = L for
    every grid used in this package.
    """
    x = grid.nodes()
    env = np.exp(-x * x)
    h_prev = np.ones_like(x)
    h_curr = 2.0 * x
    basket = []
    for k in range(count):
        if k == 0:
            herm = h_prev
        elif k == 1:
            herm = h_curr
        else:
            h_prev, h_curr = h_curr, 2.0 * x * h_curr - 2.0 * (k - 1) * h_prev
            herm = h_curr
        psi = herm * env
        basket.append(psi / np.max(np.abs(psi)))
    return basket


def random_smooth_basket(grid, count=16, seed=7, width_factor=3.2, max_degree=8):
    """Deterministic basket of random smooth complex fields vanishing at +-L.

    Each probe is a Gaussian envelope exp(-(x/w)^2), w = L/width_factor, times
    a random complex polynomial of degree <= max_degree.  Gentle by
    construction (feature scale >~ 1) so that 4th-order stencil truncation
    stays far below the 1e-6 identity tolerances.
    """
    rng = np.random.default_rng(seed)
    x = grid.nodes()
    w = grid.L / width_factor
    env = np.exp(-((x / w) ** 2))
    t = x / grid.L
    basket = []
    for _ in range(count):
        coeffs = rng.standard_normal(max_degree + 1) + 1j * rng.standard_normal(
            max_degree + 1)
        poly = np.polynomial.polynomial.polyval(t, coeffs)
        psi = env * poly
        basket.append(psi / np.max(np.abs(psi)))
    return basket


IDENTITY_TAGS = ("eq48", "eq49", "eq50", "eq51", "eq52")


def operator_identity_bruteforce(pkg, identity_tag, test_functions, layers=8):
    """Max interior residual of a ladder-algebra identity applied numerically.

    Both sides of the named identity are applied to every test function using
    4th-order stencils; the identities relate the raising/lowering operators,
    the flat adjoint of the lowering operator, u0 and the superpotential
    derivative:

      eq48:  A+ psi = (1/sqrt2) u0 psi + Adag psi
      eq49:  [u0, Adag] psi = (hbar/sqrt(2m)) u0' psi
      eq50:  [A-, Adag] psi = (hbar/sqrt(m)) phi-' psi
      eq51:  A+^2 psi = Adag^2 psi + sqrt2 Adag(u0 psi)
                        + (1/2)(u0^2 + (hbar/sqrt m) u0') psi
      eq52:  (A- A+ + A+ A-) psi = 2 Adag A- psi + sqrt2 u0 A- psi
                                   + (hbar/sqrt m) Phi' psi
    """
    from . import ladder

    if identity_tag not in IDENTITY_TAGS:
        raise ValueError(f"unknown identity tag {identity_tag!r}")
    grid = pkg.grid
    x = grid.nodes()
    hbar = pkg.profile.params.hbar
    m = pkg.profile.mass.m(x)
    u0 = pkg.u0
    u0p = ladder.u0_prime(pkg.profile, x)
    phim_prime = ladder.phi_minus_prime(pkg)
    phi_prime = phim_prime + 0.5 * u0p  # Phi = phi- + u0/2
    sqrt2 = np.sqrt(2.0)

    a_min = lambda f: ladder.apply_A_minus(pkg, f)
    a_plu = lambda f: ladder.apply_A_plus(pkg, f)
    a_dag = lambda f: ladder.apply_A_minus_dagger(pkg, f)

    worst = 0.0
    sl = slice(layers, -layers) if layers else slice(None)
    for psi in test_functions:
        psi = np.asarray(psi)
        if psi.shape != (grid.N,):
            raise GridMismatch("test function is not sampled on the package grid")
        if identity_tag == "eq48":
            lhs = a_plu(psi)
            rhs = u0 * psi / sqrt2 + a_dag(psi)
        elif identity_tag == "eq49":
            lhs = u0 * a_dag(psi) - a_dag(u0 * psi)
            rhs = hbar / np.sqrt(2.0 * m) * u0p * psi
        elif identity_tag == "eq50":
            lhs = a_min(a_dag(psi)) - a_dag(a_min(psi))
            rhs = hbar / np.sqrt(m) * phim_prime * psi
        elif identity_tag == "eq51":
            lhs = a_plu(a_plu(psi))
            rhs = (a_dag(a_dag(psi)) + sqrt2 * a_dag(u0 * psi)
                   + 0.5 * (u0 * u0 + hbar / np.sqrt(m) * u0p) * psi)
        else:  # eq52
            lhs = a_min(a_plu(psi)) + a_plu(a_min(psi))
            rhs = (2.0 * a_dag(a_min(psi)) + sqrt2 * u0 * a_min(psi)
                   + hbar / np.sqrt(m) * phi_prime * psi)
        worst = max(worst, float(np.max(np.abs((lhs - rhs)[sl]))))
    return worst
