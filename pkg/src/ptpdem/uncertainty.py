"""Variance chain, uncertainty bounds, and the oscillator case study.

Two routes to the same variances are computed and compared:

* quadrature: var(O) = <O^2> - <O>^2 directly on the coherent state;
* closed-form chain:

      (dPhi)^2 = (hbar/2)<Phi'/sqrt m> + (hbar/4)<u0'/sqrt m> + (du0)^2/4,
      (dPi)^2  = (hbar/2)<Phi'/sqrt m> - (hbar/4)<u0'/sqrt m>,

  whose brackets are themselves evaluated by quadrature.  The chain is an
  operator-algebra consequence of the flat adjoint relations; under the eta
  inner product those relations fail, so chain and direct quadrature agree
  only where the metric is trivial.  Their difference (delta_Phi, delta_Pi)
  is first-class output, not an error.

Two uncertainty-bound conventions are always evaluated: the squared
commutator bound |<[Phi,Pi]>|^2 used by the source analysis and the standard
Robertson bound |<[Phi,Pi]>|^2/4.  The headline `violated` flags are pure
functions of the stored quadrature numbers, one per convention.

The constant-mass oscillator family (beta1 = -1, omega^2 = 4 beta2,
``ho_profile``) is the case study: ``ho_closed_forms`` collects the quoted
closed forms for it -- note its Phi variance carries a coefficient *linear*
in (beta2 - 1) where the chain's own algebra gives (beta2 - 1)^2, so the
quoted product is negative for beta2 < 1/3 and is flagged non-physical --
and ``ho_case_study`` runs the full pipeline at alpha = 0 and assembles the
comparison report.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .ladder import build_ladder, phi_minus_prime, u0_prime
from .metric import build_metric, inner_product
from .profiles import DEFAULT_GRID, ho_profile
from .states import coherent_state, variance_report

__all__ = [
    "ClosedFormChain",
    "UncertaintyReport",
    "HoClosedForms",
    "closed_form_chain",
    "ho_closed_forms",
    "ho_case_study",
    "inequality_74",
    "SATURATION_SLACK",
]

SATURATION_SLACK = 1e-7


@dataclass(frozen=True)
class ClosedFormChain:
    """Chain evaluations of the variances and bounds.

    decomposition_tail is the exact amount by which the chain product
    exceeds the standard bound:

        product_cf - bound_standard_sq
            = (hbar/8)(du0)^2 <phi-'/sqrt m> - (hbar^2/16)<u0'/sqrt m>^2,

    evaluated from its own brackets (an internal identity of the chain).
    Negative variances/products are reported as computed and flagged.
    """

    var_Phi_cf: float
    var_Pi_cf: float
    du0_var: float
    bound_paper_sq: float
    bound_standard_sq: float
    product_cf: float
    decomposition_tail: float
    non_physical: bool


def _bracket(state, metric, field):
    """<state| w field |state> for a real multiplication field (real part)."""
    return inner_product(state.samples, field * state.samples, metric,
                         convention=state.convention).real


def closed_form_chain(profile, pkg, state, metric):
    """Evaluate the variance chain with every bracket under the state's
    convention."""
    x = pkg.grid.nodes()
    hbar = profile.params.hbar
    m = np.asarray(profile.mass.m(x), dtype=float)
    root_m = np.sqrt(m)
    phim_p = phi_minus_prime(pkg)
    u0_p = u0_prime(profile, x)
    Phi_p = phim_p + 0.5 * u0_p

    mean_Phi_p = _bracket(state, metric, Phi_p / root_m)
    mean_u0_p = _bracket(state, metric, u0_p / root_m)
    mean_phim_p = _bracket(state, metric, phim_p / root_m)
    mean_u0 = _bracket(state, metric, pkg.u0)
    mean_u0_sq = _bracket(state, metric, pkg.u0 ** 2)
    du0_var = mean_u0_sq - mean_u0 ** 2

    var_Phi_cf = (0.5 * hbar * mean_Phi_p + 0.25 * hbar * mean_u0_p
                  + 0.25 * du0_var)
    var_Pi_cf = 0.5 * hbar * mean_Phi_p - 0.25 * hbar * mean_u0_p
    bound_paper_sq = (hbar * mean_Phi_p) ** 2
    product_cf = var_Phi_cf * var_Pi_cf
    tail = (hbar / 8.0) * du0_var * mean_phim_p - (hbar ** 2 / 16.0) * mean_u0_p ** 2
    return ClosedFormChain(
        var_Phi_cf=var_Phi_cf,
        var_Pi_cf=var_Pi_cf,
        du0_var=du0_var,
        bound_paper_sq=bound_paper_sq,
        bound_standard_sq=0.25 * bound_paper_sq,
        product_cf=product_cf,
        decomposition_tail=tail,
        non_physical=(var_Phi_cf < 0.0 or var_Pi_cf < 0.0 or product_cf < 0.0),
    )


@dataclass(frozen=True)
class HoClosedForms:
    """Quoted closed forms for the oscillator family at alpha = 0.

    var_Phi here is hbar*beta2 + (beta2-1)*m*dx_sq (coefficient linear in
    beta2-1); the chain's algebra yields the square instead, so the two
    coincide only at beta2 = 1.  product = var_Phi * var_Pi, negative for
    beta2 < 1/3.
    """

    var_Pi: float
    var_Phi: float
    bound_sq: float
    product: float
    dx_sq: float
    c0_abs: float
    non_physical: bool


def ho_closed_forms(beta2, m=1.0, hbar=1.0):
    """Closed-form values for the constant-mass oscillator family."""
    if beta2 < 0:
        raise DomainError("the oscillator family requires beta2 >= 0")
    beta = (m / hbar) * (1.0 + beta2)
    dx_sq = 1.0 / (2.0 * beta)
    var_Pi = hbar
    var_Phi = hbar * beta2 + (beta2 - 1.0) * m * dx_sq
    product = var_Phi * var_Pi
    return HoClosedForms(
        var_Pi=var_Pi,
        var_Phi=var_Phi,
        bound_sq=hbar ** 2 * (1.0 + beta2) ** 2,
        product=product,
        dx_sq=dx_sq,
        c0_abs=(beta / np.pi) ** 0.25,
        non_physical=(var_Phi < 0.0 or product < 0.0),
    )


@dataclass(frozen=True)
class UncertaintyReport:
    """Chain-vs-quadrature comparison with both bound conventions.

    delta_* = chain value minus quadrature value.  The violated_* flags are
    computed from the quadrature numbers with a small saturation slack so
    that exact equality (the Hermitian minimum-uncertainty case) does not
    flip a flag on rounding.  demo_* fields carry the quoted oscillator
    closed forms and are populated only by ho_case_study.
    """

    chain: ClosedFormChain
    quad_var_Phi: float
    quad_var_Pi: float
    quad_bound_sq: float
    product_quad: float
    delta_Phi: float
    delta_Pi: float
    violated_paper_convention: bool
    violated_standard_convention: bool
    beta0: float
    inequality_74_holds: bool
    convention: str
    demo: Optional[HoClosedForms] = None


def _violations(product_quad, quad_bound_sq):
    scale = max(abs(product_quad), abs(quad_bound_sq), 1.0)
    slack = SATURATION_SLACK * scale
    return (product_quad < quad_bound_sq - slack,
            product_quad < 0.25 * quad_bound_sq - slack)


def assemble_report(profile, pkg, state, metric, *, demo=None):
    """Run variance quadrature + chain on one state and compare."""
    moments = variance_report(state, pkg, metric)
    chain = closed_form_chain(profile, pkg, state, metric)
    quad_bound_sq = abs(moments.mean_commutator) ** 2
    product_quad = moments.var_Phi * moments.var_Pi
    violated_paper, violated_standard = _violations(product_quad, quad_bound_sq)
    beta0 = 1.0 + profile.params.beta2
    return UncertaintyReport(
        chain=chain,
        quad_var_Phi=moments.var_Phi,
        quad_var_Pi=moments.var_Pi,
        quad_bound_sq=quad_bound_sq,
        product_quad=product_quad,
        delta_Phi=chain.var_Phi_cf - moments.var_Phi,
        delta_Pi=chain.var_Pi_cf - moments.var_Pi,
        violated_paper_convention=violated_paper,
        violated_standard_convention=violated_standard,
        beta0=beta0,
        inequality_74_holds=(inequality_74(profile.params.beta2)
                             if profile.params.beta2 >= 0 else False),
        convention=state.convention,
        demo=demo,
    )


def ho_case_study(beta2, m=1.0, hbar=1.0, grid=None, convention="eta"):
    """Full pipeline for the oscillator family at alpha = 0.

    profile -> metric -> ladder -> coherent state -> variances, plus the
    chain and the quoted closed forms, assembled into one report.
    """
    if grid is None:
        grid = DEFAULT_GRID
    profile = ho_profile(beta2, m=m, hbar=hbar, validation_grid=grid)
    metric = build_metric(profile, grid)
    pkg = build_ladder(profile, grid)
    state = coherent_state(pkg, 0.0 + 0.0j, metric, convention=convention)
    demo = ho_closed_forms(beta2, m=m, hbar=hbar)
    return assemble_report(profile, pkg, state, metric, demo=demo)


def inequality_74(beta2):
    """Truth value of (beta0 - 1/2)^2 + 1/4 <= -1/beta0 with beta0 = 1+beta2.

    For beta2 >= 0 the left side is positive and the right side negative, so
    this is false everywhere; it is evaluated literally rather than assumed.
    """
    if beta2 < 0:
        raise DomainError("inequality is stated for beta2 >= 0")
    beta0 = 1.0 + beta2
    return (beta0 - 0.5) ** 2 + 0.25 <= -1.0 / beta0
