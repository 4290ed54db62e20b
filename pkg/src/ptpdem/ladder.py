"""Ladder factorization H = A+ A- and the deformed observables Phi, Pi.

The intertwiner of the susy module cannot factorize the non-Hermitian H on
its own; the working ansatz uses a *pair* of first-order operators

    A± = (1/sqrt2)( a±(x) d/dx a±(x) + phi±(x) ),
    a- = sqrt(hbar) m^{-1/4},     a+ = i a-,

so that H = A+ A- with the ground-state energy fixed at zero.  Matching
coefficients leaves a single Riccati equation for phi-:

    -(hbar/sqrt m) phi-' + u0 phi- + phi-^2 = Ve_tilde,
    u0 = phi+ - phi- = 2(beta1+beta2) x sqrt(m),
    Ve_tilde = 2 V_e + (hbar/2)(beta1+beta2) x (m'/m)
               + (hbar^2/4m^2)(7 m'^2/(4m) - m'').

The factor i in a+ makes a+ (a+ psi)' = -a- (a- psi)', so both operator
actions are real first-order stencils.  Deformed coordinate and momentum:

    Phi = (phi- + phi+)/2 = (A+ + A-)/sqrt2       (multiplication operator),
    Pi  = (i/sqrt2)(Adag - A-) = -i a- d/dx a-    (flat-self-adjoint),

with Adag the *flat-space* adjoint of A-; their commutator is the
multiplication operator [Phi, Pi] = i hbar Phi' / sqrt(m).  (The equivalent
form Pi = (i/sqrt2)(A+ - A- - u0) needs the A+ = u0/sqrt2 + Adag relation;
writing u0 without the 1/sqrt2 there is inconsistent with that relation and
is not used.)
"""

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatch, ResidualTooLarge
from .fd import fd1
from .profiles import GridSpec, Profile
from .riccati import RiccatiCoefficients, RiccatiSolution, solve_riccati
from .susy import V_e_callable

__all__ = [
    "LadderPackage",
    "DeformedObservables",
    "build_ladder",
    "tilde_v_e_callable",
    "u0_prime",
    "phi_minus_prime",
    "apply_A_minus",
    "apply_A_plus",
    "apply_A_minus_dagger",
    "apply_Pi",
    "deformed_observables",
    "apply_commutator_Phi_Pi",
]

RESIDUAL_TOL = 1e-8

A_PLUS_TAG = "i*a_minus"


def tilde_v_e_callable(profile):
    """Right-hand side Ve_tilde of the phi- Riccati equation, as a callable."""
    params = profile.params
    mass = profile.mass
    V_e = V_e_callable(profile)
    hbar = params.hbar
    sigma = params.sigma

    def tilde_v_e(x):
        m = mass.m(x)
        mp = mass.m_prime(x)
        mpp = mass.m_double_prime(x)
        return (2.0 * V_e(x) + 0.5 * hbar * sigma * x * (mp / m)
                + (hbar ** 2 / (4.0 * m ** 2)) * (1.75 * mp ** 2 / m - mpp))

    return tilde_v_e


def u0_callable(profile):
    """u0 = 2(beta1+beta2) x sqrt(m)."""
    sigma2 = 2.0 * profile.params.sigma
    mass_m = profile.mass.m

    def u0(x):
        return sigma2 * x * np.sqrt(mass_m(x))

    return u0


def u0_prime(profile, x):
    """Analytic derivative of u0: 2(beta1+beta2)(sqrt m + x m'/(2 sqrt m))."""
    m = profile.mass.m(x)
    mp = profile.mass.m_prime(x)
    root = np.sqrt(m)
    return 2.0 * profile.params.sigma * (root + 0.5 * x * mp / root)


@dataclass(frozen=True)
class LadderPackage:
    """Sampled ladder data: a-, u0, phi- (with solve metadata), phi+.

    a+ is i*a- by construction and is kept as the tag string a_plus_tag, not
    a stored complex field.  lambda0 is the ground-state offset of the
    factorization, fixed to zero.
    """

    grid: GridSpec
    profile: Profile
    a_minus: np.ndarray
    u0: np.ndarray
    phi_minus: RiccatiSolution
    phi_plus: np.ndarray
    lambda0: float = 0.0
    a_plus_tag: str = A_PLUS_TAG


def _phi_minus_coefficients(profile):
    """Canonical form of phi-' = (sqrt m/hbar)(u0 phi + phi^2 - Ve_tilde)."""
    hbar = profile.params.hbar
    mass = profile.mass
    tilde = tilde_v_e_callable(profile)
    u0 = u0_callable(profile)

    def p(x):
        return -np.sqrt(mass.m(x)) / hbar * tilde(x)

    def q(x):
        return np.sqrt(mass.m(x)) / hbar * u0(x)

    def r(x):
        return np.sqrt(mass.m(x)) / hbar

    def r_prime(x):
        return mass.m_prime(x) / (2.0 * hbar * np.sqrt(mass.m(x)))

    return RiccatiCoefficients(p=p, q=q, r=r, r_prime=r_prime)


def build_ladder(profile, grid, ic_value=0.0, *, residual_tol=RESIDUAL_TOL):
    """Solve the phi- Riccati equation and assemble the ladder package.

    The default initial value phi-(0)=0 matches the parity of the bounded
    solution for even profiles.  residual_norm is the max abs interior value
    of -(hbar/sqrt m) phi-' + u0 phi- + phi-^2 - Ve_tilde with phi-' from
    4th-order differences of the returned samples.
    """
    x = grid.nodes()
    samples, route = solve_riccati(_phi_minus_coefficients(profile), grid,
                                   float(ic_value))
    hbar = profile.params.hbar
    m = np.asarray(profile.mass.m(x), dtype=float)
    u0 = np.asarray(u0_callable(profile)(x), dtype=float)
    tilde = np.asarray(tilde_v_e_callable(profile)(x), dtype=float)
    lhs = (-(hbar / np.sqrt(m)) * fd1(samples, grid.h) + u0 * samples
           + samples ** 2 - tilde)
    residual = float(np.max(np.abs(lhs[2:-2])))
    if residual > residual_tol:
        raise ResidualTooLarge(
            f"phi- Riccati residual {residual:.3e} exceeds {residual_tol:g} "
            f"(route {route}, ic={ic_value:g})"
        )
    solution = RiccatiSolution(field_samples=samples, mu=0.0,
                               ic_value=float(ic_value),
                               residual_norm=residual, route=route)
    a_minus = np.sqrt(hbar) * m ** -0.25
    return LadderPackage(grid=grid, profile=profile, a_minus=a_minus, u0=u0,
                         phi_minus=solution, phi_plus=samples + u0)


def phi_minus_prime(pkg):
    """phi-' at the nodes from the Riccati right-hand side (no differencing)."""
    x = pkg.grid.nodes()
    profile = pkg.profile
    m = np.asarray(profile.mass.m(x), dtype=float)
    tilde = np.asarray(tilde_v_e_callable(profile)(x), dtype=float)
    phi = pkg.phi_minus.field_samples
    return np.sqrt(m) / profile.params.hbar * (phi ** 2 + pkg.u0 * phi - tilde)


def _check_grid(pkg, psi):
    psi = np.asarray(psi)
    if psi.shape != (pkg.grid.N,):
        raise GridMismatch(
            f"state has shape {psi.shape}, expected ({pkg.grid.N},)")
    return psi


def _a_d_a(pkg, psi):
    """a- (a- psi)' with a 4th-order first-derivative stencil."""
    return pkg.a_minus * fd1(pkg.a_minus * psi, pkg.grid.h)


def apply_A_minus(pkg, psi):
    """Lowering operator: (1/sqrt2)(a-(a- psi)' + phi- psi)."""
    psi = _check_grid(pkg, psi)
    return (_a_d_a(pkg, psi) + pkg.phi_minus.field_samples * psi) / np.sqrt(2.0)


def apply_A_plus(pkg, psi):
    """Raising operator: (1/sqrt2)(-a-(a- psi)' + phi+ psi).

    Uses a+ (a+ psi)' = -a- (a- psi)' from a+ = i a-.
    """
    psi = _check_grid(pkg, psi)
    return (-_a_d_a(pkg, psi) + pkg.phi_plus * psi) / np.sqrt(2.0)


def apply_A_minus_dagger(pkg, psi):
    """Flat-space adjoint of the lowering operator:
    (1/sqrt2)(-a-(a- psi)' + phi- psi)."""
    psi = _check_grid(pkg, psi)
    return (-_a_d_a(pkg, psi) + pkg.phi_minus.field_samples * psi) / np.sqrt(2.0)


def apply_Pi(pkg, psi):
    """Deformed momentum action: -i a- (a- psi)'."""
    psi = _check_grid(pkg, psi)
    return -1j * _a_d_a(pkg, psi)


@dataclass(frozen=True)
class DeformedObservables:
    """Phi (multiplication), the Pi action, and the commutator field.

    commutator_field is hbar Phi'/sqrt(m): the real field F such that
    [Phi, Pi] psi = i F psi, with Phi' assembled analytically from the
    Riccati right-hand side and the u0 derivative.
    """

    Phi: np.ndarray
    Pi_action: callable
    commutator_field: np.ndarray


def deformed_observables(pkg):
    """Assemble Phi = (phi- + phi+)/2, the Pi action, and hbar Phi'/sqrt m."""
    x = pkg.grid.nodes()
    profile = pkg.profile
    Phi = 0.5 * (pkg.phi_minus.field_samples + pkg.phi_plus)
    Phi_prime = phi_minus_prime(pkg) + 0.5 * u0_prime(profile, x)
    m = np.asarray(profile.mass.m(x), dtype=float)
    commutator_field = profile.params.hbar * Phi_prime / np.sqrt(m)
    return DeformedObservables(
        Phi=Phi,
        Pi_action=lambda psi: apply_Pi(pkg, psi),
        commutator_field=commutator_field,
    )


def apply_commutator_Phi_Pi(pkg, psi):
    """[Phi, Pi] psi by direct application of both orderings."""
    psi = _check_grid(pkg, psi)
    Phi = 0.5 * (pkg.phi_minus.field_samples + pkg.phi_plus)
    return Phi * apply_Pi(pkg, psi) - apply_Pi(pkg, Phi * psi)
