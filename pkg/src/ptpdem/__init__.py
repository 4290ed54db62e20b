"""Numerical laboratory for a PT-symmetric position-dependent-mass model.

The package follows one pipeline:

profiles  -> validated mass/potential/PT-parameter bundles and grids
metric    -> the similarity weight eta = exp(Lambda) and eta-weighted brackets
susy      -> effective fields u, V_e, the auxiliary-K Riccati equation,
             superpotential and partner potential
ladder    -> the A+/A- factorization of H, deformed coordinate Phi and
             momentum Pi
states    -> closed-form coherent states of A-, expectation values, variances
uncertainty -> variance chain vs direct quadrature, uncertainty-bound
             conventions, the constant-mass oscillator case study
lattice   -> independent dense finite-difference verification
oracles   -> analytic Gaussian moments and brute-force operator identities
cli       -> `ptpdem` command wiring the stages to CSV/key-value reports
"""

from .errors import (
    ConfigError,
    DerivativeMismatch,
    DomainError,
    EigensolveFailure,
    GridMismatch,
    NonNormalizable,
    NonPositiveMass,
    NumericalError,
    ParityViolation,
    PoleDetected,
    PtpdemError,
    QuadratureNonConvergence,
    ResidualTooLarge,
    ValidationError,
)
from .profiles import (
    DEFAULT_GRID,
    GridSpec,
    MassProfile,
    PotentialProfile,
    Profile,
    PTParameters,
    constant_mass,
    harmonic_potential,
    ho_profile,
    is_hermitian,
    load_config,
    make_profile,
    profile_from_config,
    rational_mass,
    table_mass,
    table_potential,
    zero_potential,
)
from .metric import (
    DEFAULT_QUADRATURE,
    MetricWeight,
    QuadratureSettings,
    adaptive_integral,
    build_metric,
    cumulative_from_zero,
    inner_product,
    lambda_of,
    sample_weights,
)
from .riccati import RiccatiCoefficients, RiccatiSolution, solve_riccati
from .susy import (
    EffectiveFields,
    SusyPackage,
    effective_fields,
    intertwining_consistency_residual,
    solve_K_riccati,
    susy_package,
)
from .ladder import (
    DeformedObservables,
    LadderPackage,
    apply_A_minus,
    apply_A_minus_dagger,
    apply_A_plus,
    apply_Pi,
    apply_commutator_Phi_Pi,
    build_ladder,
    deformed_observables,
    phi_minus_prime,
    u0_prime,
)
from .states import (
    CoherentState,
    ExpectationReport,
    boundary_density_ratio,
    coherent_state,
    convention_residuals,
    expectation,
    expectation_fd,
    variance_report,
)
from .uncertainty import (
    ClosedFormChain,
    HoClosedForms,
    UncertaintyReport,
    assemble_report,
    closed_form_chain,
    ho_case_study,
    ho_closed_forms,
    inequality_74,
)
from .lattice import (
    LatticeOperator,
    ResidualReport,
    SpectrumSlice,
    apply_hamiltonian,
    discretize_H,
    discretize_H_dagger,
    factorization_residual,
    pseudo_hermiticity_residual,
    pt_commutator_residual,
    spectrum_reality,
    verify_profile,
)
from .oracles import (
    gaussian_moment,
    hermite_gaussian_basket,
    operator_identity_bruteforce,
    random_smooth_basket,
)

__version__ = "0.1.0"
