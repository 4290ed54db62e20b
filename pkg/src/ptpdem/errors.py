"""Exception taxonomy shared by every module in the package.

Three families, matching the CLI exit-code contract:

* ValidationError (exit 2) -- the inputs were rejected before numerics ran;
* NumericalError  (exit 3) -- a numerical procedure failed honestly
  (pole crossed, quadrature refinement exhausted, eigensolver breakdown,
  residual above tolerance);
* NonNormalizable (exit 4) -- a state's weighted norm cannot be trusted on
  the truncated domain.
"""


class PtpdemError(Exception):
    """Base class for all package errors."""


class ValidationError(PtpdemError):
    """Input rejected by a validating constructor or a precondition."""


class ParityViolation(ValidationError):
    """Mass or potential is not even within tolerance."""


class NonPositiveMass(ValidationError):
    """Mass profile is not strictly positive (or not finite) at a node."""


class DerivativeMismatch(ValidationError):
    """Supplied analytic derivative disagrees with finite differences."""


class GridMismatch(ValidationError):
    """Sampled fields do not live on the expected grid."""


class DomainError(ValidationError):
    """Scalar argument outside the documented domain."""


class ConfigError(ValidationError):
    """Configuration file missing keys or using unknown kinds."""


class NumericalError(PtpdemError):
    """A numerical procedure failed; the result is not usable."""


class QuadratureNonConvergence(NumericalError):
    """Adaptive quadrature exhausted its refinement depth."""


class PoleDetected(NumericalError):
    """Riccati solution exceeded the blow-up cap before reaching the boundary."""

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


class ResidualTooLarge(NumericalError):
    """An ODE/identity residual exceeded its configured tolerance."""


class EigensolveFailure(NumericalError):
    """Dense eigensolver did not converge."""


class NonNormalizable(PtpdemError):
    """Weighted norm fails the boundary-mass diagnostic on the truncated domain."""
