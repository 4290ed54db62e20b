"""Coherent states of the lowering operator and their moment reports.

A coherent state is the eigenstate A- psi = alpha psi.  Because A- is first
order, the eigenstate has the closed quadrature form

    psi(x) = c0' (1/a-(x)) exp( int_0^x (sqrt2 alpha - phi-(t)) / a-^2(t) dt ),

which is evaluated directly on the grid (no ODE marching, no drift).  With
a-^2 = hbar/sqrt(m) the exponent splits into sqrt2*alpha*J0 - J1 with
J0 = int sqrt(m)/hbar and J1 = int phi- sqrt(m)/hbar; J0 is integrated
adaptively from the mass callable and J1 by the exact antiderivative of a
cubic spline through the phi- samples.

Normalization happens under a declared convention: "eta" folds the metric
weight e^{Lambda} into the bracket (the physical inner product of the
non-Hermitian model), "flat" uses the plain L2 product.  Expectation values
apply operators in their flat differential/multiplication form and fold the
weight into the bracket only.

For these closed-form states every operator in the package acts by pure
multiplication (the derivative is known analytically), so expectation values
carry quadrature error only.  ``expectation_fd`` recomputes them with the
finite-difference operator actions as an independent cross-check.
"""

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import GridMismatch, NonNormalizable, ValidationError
from .ladder import (
    apply_A_minus,
    apply_A_plus,
    apply_A_minus_dagger,
    apply_commutator_Phi_Pi,
    apply_Pi,
    phi_minus_prime,
    u0_prime,
)
from .metric import cumulative_from_zero, inner_product, sample_weights
from .profiles import GridSpec

__all__ = [
    "CoherentState",
    "ExpectationReport",
    "coherent_state",
    "expectation",
    "expectation_fd",
    "variance_report",
    "convention_residuals",
    "boundary_density_ratio",
    "OP_TAGS",
    "CONVENTIONS",
]

BOUNDARY_RATIO_TOL = 1e-10
CONVENTIONS = ("eta", "flat")
OP_TAGS = ("Phi", "Pi", "Phi2", "Pi2", "x", "x2", "A_minus", "A_plus",
           "A_minus_dagger", "commutator", "u0")


@dataclass(frozen=True)
class CoherentState:
    """Normalized eigenstate samples of A- with eigenvalue alpha.

    c0 is the state's value at the origin -- the integration constant of the
    closed form, with the overall phase fixed so that c0 is real positive.
    convention records which inner product ("eta" or "flat") the state is
    normalized under.
    """

    alpha: complex
    samples: np.ndarray
    c0: complex
    convention: str
    grid: GridSpec


def boundary_density_ratio(samples, metric, convention):
    """max weighted density at +-L divided by its max over the grid."""
    weight = metric.eta_samples if convention == "eta" else 1.0
    density = weight * np.abs(samples) ** 2
    peak = float(np.max(density))
    if peak == 0.0:
        return np.inf
    return float(max(density[0], density[-1]) / peak)


def coherent_state(pkg, alpha, metric, convention="eta"):
    """Build the normalized coherent state for eigenvalue alpha.

    Raises NonNormalizable when the weighted density at the domain edge
    exceeds 1e-10 of its peak: on a truncated domain such a norm integral is
    dominated by the cutoff, not the state.
    """
    if convention not in CONVENTIONS:
        raise ValidationError(f"unknown convention {convention!r}")
    alpha = complex(alpha)
    if not np.isfinite(alpha):
        raise ValidationError("coherent-state eigenvalue must be finite")
    grid = pkg.grid
    if metric.grid != grid:
        raise GridMismatch("metric and ladder package use different grids")
    x = grid.nodes()
    profile = pkg.profile
    hbar = profile.params.hbar
    mass_m = profile.mass.m

    J0 = cumulative_from_zero(lambda t: np.sqrt(mass_m(t)) / hbar, grid)
    integrand = (pkg.phi_minus.field_samples
                 * np.sqrt(np.asarray(mass_m(x), dtype=float)) / hbar)
    J1 = CubicSpline(x, integrand).antiderivative()(x)
    J1 = J1 - J1[grid.mid]

    exponent = np.sqrt(2.0) * alpha * J0 - J1
    # evaluate at a shifted scale so exp() cannot overflow before
    # normalization cancels the shift
    log_amp = exponent.real - np.log(pkg.a_minus)
    shift = float(np.max(log_amp))
    raw = np.exp(exponent - shift) / pkg.a_minus

    ratio = boundary_density_ratio(raw, metric, convention)
    if ratio > BOUNDARY_RATIO_TOL:
        raise NonNormalizable(
            f"weighted density at |x|=L is {ratio:.3e} of its peak "
            f"(limit {BOUNDARY_RATIO_TOL:g}); the {convention} norm is "
            "cutoff-dominated on this domain"
        )
    norm_sq = inner_product(raw, raw, metric, convention=convention).real
    samples = raw / np.sqrt(norm_sq)
    return CoherentState(alpha=alpha, samples=samples,
                         c0=complex(samples[grid.mid]),
                         convention=convention, grid=grid)


def _analytic_action(op_tag, state, pkg):
    """Apply an operator to coherent-state samples by multiplication.

    Valid only for the closed-form states produced by coherent_state, whose
    logarithmic derivative is (sqrt2 alpha - phi-)/a-^2 exactly; every tagged
    operator then reduces to multiplication by a known field.
    """
    grid = pkg.grid
    x = grid.nodes()
    profile = pkg.profile
    hbar = profile.params.hbar
    m = np.asarray(profile.mass.m(x), dtype=float)
    phi_m = pkg.phi_minus.field_samples
    Phi = 0.5 * (phi_m + pkg.phi_plus)
    s = state.samples
    alpha = state.alpha
    root2 = np.sqrt(2.0)

    if op_tag == "Phi":
        return Phi * s
    if op_tag == "Phi2":
        return Phi ** 2 * s
    if op_tag == "Pi":
        return -1j * (root2 * alpha - phi_m) * s
    if op_tag == "Pi2":
        return ((hbar / np.sqrt(m)) * phi_minus_prime(pkg)
                - (root2 * alpha - phi_m) ** 2) * s
    if op_tag == "x":
        return x * s
    if op_tag == "x2":
        return x ** 2 * s
    if op_tag == "A_minus":
        return alpha * s
    if op_tag == "A_plus":
        return (root2 * Phi - alpha) * s
    if op_tag == "A_minus_dagger":
        return (root2 * phi_m - alpha) * s
    if op_tag == "commutator":
        Phi_prime = phi_minus_prime(pkg) + 0.5 * u0_prime(profile, x)
        return 1j * hbar * Phi_prime / np.sqrt(m) * s
    if op_tag == "u0":
        return pkg.u0 * s
    raise ValidationError(f"unknown operator tag {op_tag!r}")


def expectation(op_tag, state, pkg, metric):
    """<state| w O |state> with w set by the state's convention.

    The operator acts in its flat differential/multiplication form; for the
    closed-form coherent states this action is evaluated analytically, so
    the result carries quadrature error only.
    """
    if state.grid != pkg.grid or metric.grid != pkg.grid:
        raise GridMismatch("state, package and metric grids differ")
    acted = _analytic_action(op_tag, state, pkg)
    return inner_product(state.samples, acted, metric,
                         convention=state.convention)


def expectation_fd(op_tag, state, pkg, metric):
    """Same bracket as expectation(), with stencil-applied operators.

    Independent of the closed-form structure; accuracy is limited by the
    4th-order first-derivative stencil.
    """
    if state.grid != pkg.grid or metric.grid != pkg.grid:
        raise GridMismatch("state, package and metric grids differ")
    s = state.samples
    x = pkg.grid.nodes()
    if op_tag == "Pi":
        acted = apply_Pi(pkg, s)
    elif op_tag == "Pi2":
        acted = apply_Pi(pkg, apply_Pi(pkg, s))
    elif op_tag == "A_minus":
        acted = apply_A_minus(pkg, s)
    elif op_tag == "A_plus":
        acted = apply_A_plus(pkg, s)
    elif op_tag == "A_minus_dagger":
        acted = apply_A_minus_dagger(pkg, s)
    elif op_tag == "commutator":
        acted = apply_commutator_Phi_Pi(pkg, s)
    elif op_tag in ("Phi", "Phi2", "x", "x2", "u0"):
        acted = _analytic_action(op_tag, state, pkg)  # pure multiplication
    else:
        raise ValidationError(f"unknown operator tag {op_tag!r}")
    return inner_product(s, acted, metric, convention=state.convention)


@dataclass(frozen=True)
class ExpectationReport:
    """Means and variances of Phi, Pi and x on one state.

    Variances are Re(<O^2> - <O>^2) with no clamping: negative or zero
    values are reported as computed.  Under the eta convention with
    Re(alpha) != 0 the brackets develop imaginary parts; the report keeps
    real parts (full complex values are available via expectation()), except
    mean_commutator which is intrinsically imaginary and kept complex.
    beta_weight = (m(0)/hbar)(1 + beta2) is the Gaussian weight exponent
    governing the constant-mass oscillator family's densities.
    """

    mean_Phi: float
    mean_Pi: float
    var_Phi: float
    var_Pi: float
    mean_commutator: complex
    mean_x: float
    var_x: float
    convention: str
    beta_weight: float


def variance_report(state, pkg, metric):
    """Assemble means/variances of Phi, Pi, x and <[Phi,Pi]> by quadrature."""
    mean_Phi = expectation("Phi", state, pkg, metric)
    mean_Pi = expectation("Pi", state, pkg, metric)
    mean_x = expectation("x", state, pkg, metric)
    var_Phi = (expectation("Phi2", state, pkg, metric) - mean_Phi ** 2).real
    var_Pi = (expectation("Pi2", state, pkg, metric) - mean_Pi ** 2).real
    var_x = (expectation("x2", state, pkg, metric) - mean_x ** 2).real
    params = pkg.profile.params
    m0 = float(np.asarray(pkg.profile.mass.m(0.0), dtype=float))
    beta_weight = (m0 / params.hbar) * (1.0 + params.beta2)
    return ExpectationReport(
        mean_Phi=mean_Phi.real,
        mean_Pi=mean_Pi.real,
        var_Phi=var_Phi,
        var_Pi=var_Pi,
        mean_commutator=expectation("commutator", state, pkg, metric),
        mean_x=mean_x.real,
        var_x=var_x,
        convention=state.convention,
        beta_weight=beta_weight,
    )


def convention_residuals(state, pkg, metric):
    """Residuals of the ladder-expectation identities under the state's
    convention.

    The identities (<A-> = alpha, <Adag> = conj(alpha),
    <Phi> = <u0>/2 + sqrt2 Re alpha, <Pi> = sqrt2 Im alpha,
    <A+> = conj(alpha) + <u0>/sqrt2) hold exactly under the flat bracket;
    under eta they can fail, and this function measures by how much rather
    than asserting them.
    """
    e = lambda tag: expectation(tag, state, pkg, metric)
    alpha = state.alpha
    root2 = np.sqrt(2.0)
    mean_u0 = e("u0")
    return {
        "A_minus": abs(e("A_minus") - alpha),
        "A_minus_dagger": abs(e("A_minus_dagger") - np.conj(alpha)),
        "A_plus": abs(e("A_plus") - (np.conj(alpha) + mean_u0 / root2)),
        "Phi_mean": abs(e("Phi") - (0.5 * mean_u0 + root2 * alpha.real)),
        "Pi_mean": abs(e("Pi") - root2 * alpha.imag),
    }
