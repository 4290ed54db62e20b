"""Dense finite-difference verification of the operator-level claims.

Everything upstream manipulates closed forms; this module re-derives the
central statements on a lattice with no shared machinery beyond the profile
callables:

* discretize H = -(hbar^2/2m)(D2 - diag(u) D1) + diag(V_e) with central
  stencils of order 2 or 4 and Dirichlet (zero-padded) boundaries;
* discretize the adjoint H^dagger *independently* by swapping parameters,
  (beta1, beta2) -> (-beta2, -beta1), which realizes u -> m'/m - (2/hbar)
  (beta1+beta2) x m and V_e -> V - hbar beta2 - (hbar^2/2m)(m'/m)' without
  transposing anything;
* check the similarity relation eta H eta^{-1} = H^dagger, PT commutation,
  the ladder factorization H = A+ A-, and spectral reality.

Residual conventions.  The similarity relation holds between *differential
operators*; entry-by-entry it fails at O(1) on any grid because the
conjugated first-derivative stencil and the adjoint's own stencil represent
the same operator through different h^2-order errors.  The residual is
therefore measured by the action of the defect matrix on a basket of smooth
probe functions (interior nodes only), which converges at the stencil
order.  PT commutation, by contrast, is an exact lattice symmetry of these
stencils on a symmetric grid and is measured entrywise.
"""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import EigensolveFailure, GridMismatch, ValidationError
from .fd import fd1, fd2
from .ladder import apply_A_minus, apply_A_plus, build_ladder
from .metric import build_metric
from .oracles import hermite_gaussian_basket, random_smooth_basket
from .profiles import GridSpec, PTParameters
from .susy import effective_fields

__all__ = [
    "LatticeOperator",
    "ResidualReport",
    "SpectrumSlice",
    "difference_matrix",
    "discretize_H",
    "discretize_H_dagger",
    "apply_hamiltonian",
    "pseudo_hermiticity_residual",
    "pt_commutator_residual",
    "factorization_residual",
    "spectrum_reality",
    "verify_profile",
    "MAX_DENSE_N",
    "EIG_GENERAL_MAX_N",
]

MAX_DENSE_N = 4001
EIG_GENERAL_MAX_N = 801
DEFAULT_LAYERS = 8

_STENCILS_D1 = {
    2: ((-1, -0.5), (1, 0.5)),
    4: ((-2, 1.0 / 12.0), (-1, -8.0 / 12.0), (1, 8.0 / 12.0), (2, -1.0 / 12.0)),
}
_STENCILS_D2 = {
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    4: ((-2, -1.0 / 12.0), (-1, 16.0 / 12.0), (0, -30.0 / 12.0),
        (1, 16.0 / 12.0), (2, -1.0 / 12.0)),
}


@dataclass(frozen=True)
class LatticeOperator:
    """Dense matrix form of a differential operator on a grid.

    entries are complex in general; for the supported real even branch every
    operator here is real-valued and stored as such.  boundary is always
    "dirichlet": stencil legs falling outside the grid are dropped, which is
    the matrix form of the zero padding used by the fd module.
    """

    grid: GridSpec
    entries: np.ndarray
    boundary: str = "dirichlet"
    stencil_order: int = 4


def difference_matrix(grid, derivative, order=4):
    """Dense central-difference matrix for d/dx (derivative=1) or d2/dx2."""
    if derivative == 1:
        stencil, scale = _STENCILS_D1[order], grid.h
    elif derivative == 2:
        stencil, scale = _STENCILS_D2[order], grid.h ** 2
    else:
        raise ValidationError("only first and second derivatives are discretized")
    D = np.zeros((grid.N, grid.N))
    for offset, coeff in stencil:
        D += np.diag(np.full(grid.N - abs(offset), coeff / scale), k=offset)
    return D


def _assemble(profile, grid, stencil_order):
    if grid.N > MAX_DENSE_N:
        raise ValidationError(
            f"dense verification is capped at N={MAX_DENSE_N} (got {grid.N})")
    if stencil_order not in (2, 4):
        raise ValidationError("stencil_order must be 2 or 4")
    fields = effective_fields(profile, grid)
    m = np.asarray(profile.mass.m(grid.nodes()), dtype=float)
    D1 = difference_matrix(grid, 1, stencil_order)
    D2 = difference_matrix(grid, 2, stencil_order)
    kinetic = D2 - fields.u[:, None] * D1
    entries = (-(profile.params.hbar ** 2) / (2.0 * m))[:, None] * kinetic
    entries[np.diag_indices_from(entries)] += fields.V_e
    return LatticeOperator(grid=grid, entries=entries,
                           stencil_order=stencil_order)


def discretize_H(profile, grid, stencil_order=4):
    """Dense H = -(hbar^2/2m)(D2 - diag(u) D1) + diag(V_e)."""
    return _assemble(profile, grid, stencil_order)


def _adjoint_profile(profile):
    params = profile.params
    swapped = PTParameters(beta1=-params.beta2, beta2=-params.beta1,
                           hbar=params.hbar)
    return replace(profile, params=swapped)


def discretize_H_dagger(profile, grid, stencil_order=4):
    """Dense adjoint built from its own differential form, not a transpose.

    The adjoint of H(beta1, beta2) is H(-beta2, -beta1) with the same mass
    and potential, so the assembly path is shared and fully independent of
    the matrix produced by discretize_H.
    """
    return _assemble(_adjoint_profile(profile), grid, stencil_order)


def apply_hamiltonian(profile, grid, psi, order=4):
    """Matrix-free H psi with the same stencils and zero padding."""
    psi = np.asarray(psi)
    if psi.shape != (grid.N,):
        raise GridMismatch(f"state has shape {psi.shape}, expected ({grid.N},)")
    fields = effective_fields(profile, grid)
    m = np.asarray(profile.mass.m(grid.nodes()), dtype=float)
    kin = fd2(psi, grid.h, order=order) - fields.u * fd1(psi, grid.h, order=order)
    return -(profile.params.hbar ** 2) / (2.0 * m) * kin + fields.V_e * psi


def pseudo_hermiticity_residual(H, Hdag, metric, layers=DEFAULT_LAYERS,
                                probes=None):
    """Action residual of eta H eta^{-1} - H^dagger on smooth probes.

    Returns max over probes of the max abs interior component of
    (diag(eta) H diag(eta)^{-1} - Hdag) @ probe, with `layers` nodes dropped
    at each end.  Probes default to the first 8 sup-normalized
    Hermite-Gaussian functions.
    """
    if H.grid != Hdag.grid or metric.grid != H.grid:
        raise GridMismatch("operators and metric use different grids")
    eta = metric.eta_samples
    if probes is None:
        probes = hermite_gaussian_basket(H.grid, count=8)
    sl = slice(layers, -layers) if layers else slice(None)
    worst = 0.0
    for probe in probes:
        # action form of eta H eta^{-1} - Hdag; avoids an N x N temporary
        defect_action = eta * (H.entries @ (probe / eta)) - Hdag.entries @ probe
        worst = max(worst, float(np.max(np.abs(defect_action[sl]))))
    return worst


def pt_commutator_residual(H):
    """Entrywise norm of H - P conj(H) P with P the index reversal.

    On a symmetric grid the central stencils (including their truncated
    boundary rows) are exactly reversal-symmetric, so for a valid profile
    this residual is zero to rounding; it becomes O(1) whenever parity of
    the coefficients is broken.
    """
    A = H.entries
    return float(np.max(np.abs(A - np.conj(A[::-1, ::-1]))))


def factorization_residual(pkg, profile, grid, test_functions,
                           layers=DEFAULT_LAYERS, order=4):
    """max over test functions of |A+ A- psi - (H - lambda0) psi| relative.

    Both sides are applied with the same-order stencils; the relative scale
    is the interior sup norm of H psi per function.
    """
    sl = slice(layers, -layers) if layers else slice(None)
    worst = 0.0
    for psi in test_functions:
        psi = np.asarray(psi)
        lhs = apply_A_plus(pkg, apply_A_minus(pkg, psi))
        rhs = apply_hamiltonian(profile, grid, psi, order=order) - pkg.lambda0 * psi
        scale = float(np.max(np.abs(rhs[sl])))
        if scale == 0.0:
            scale = 1.0
        worst = max(worst, float(np.max(np.abs((lhs - rhs)[sl]))) / scale)
    return worst


@dataclass(frozen=True)
class SpectrumSlice:
    """Low-lying eigenvalues (sorted by real part) and their max |Im|."""

    eigenvalues: np.ndarray
    max_imag_eigenvalue: float
    hermitian_solve: bool


def spectrum_reality(H, count=10):
    """Eigensolve H and report max |Im| among the `count` smallest-|lambda|.

    A symmetric real (or Hermitian complex) matrix is routed to the
    symmetric solver, whose eigenvalues are real by construction; anything
    else goes through the general dense solver.
    """
    A = H.entries
    scale = float(np.max(np.abs(A)))
    symmetric = bool(np.allclose(A, np.conj(A.T), atol=1e-12 * max(scale, 1.0)))
    try:
        if symmetric:
            eigs = np.linalg.eigvalsh(A).astype(complex)
        else:
            eigs = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise EigensolveFailure(f"dense eigensolve failed: {exc}") from exc
    order = np.argsort(np.abs(eigs), kind="stable")
    lowest = eigs[order[:count]]
    lowest = lowest[np.argsort(lowest.real, kind="stable")]
    return SpectrumSlice(
        eigenvalues=lowest,
        max_imag_eigenvalue=float(np.max(np.abs(lowest.imag))),
        hermitian_solve=symmetric,
    )


@dataclass(frozen=True)
class ResidualReport:
    """One-stop verification summary for a profile on a grid."""

    pseudo_hermiticity_residual: float
    pt_commutator_residual: float
    factorization_residual: float
    max_imag_eigenvalue: float
    boundary_layers_excluded: int
    spectrum: Optional[SpectrumSlice] = None


def verify_profile(profile, grid, stencil_order=4, layers=DEFAULT_LAYERS,
                   eig_count=10, seed=7):
    """Run the full lattice verification battery on one profile.

    The eigensolve for non-symmetric matrices costs O(N^3) with a large
    constant, so it runs on a coarsened grid capped at N=801 (same L);
    symmetric matrices are solved at full resolution.
    """
    H = discretize_H(profile, grid, stencil_order)
    Hdag = discretize_H_dagger(profile, grid, stencil_order)
    metric = build_metric(profile, grid)
    ph = pseudo_hermiticity_residual(H, Hdag, metric, layers=layers)
    pt = pt_commutator_residual(H)
    pkg = build_ladder(profile, grid)
    basket = random_smooth_basket(grid, count=16, seed=seed)
    fact = factorization_residual(pkg, profile, grid, basket,
                                  layers=layers, order=stencil_order)

    A = H.entries
    symmetric = bool(np.allclose(
        A, np.conj(A.T), atol=1e-12 * max(float(np.max(np.abs(A))), 1.0)))
    if symmetric or grid.N <= EIG_GENERAL_MAX_N:
        spectrum = spectrum_reality(H, count=eig_count)
    else:
        n_red = min(grid.N, EIG_GENERAL_MAX_N)
        if n_red % 2 == 0:
            n_red -= 1
        reduced = GridSpec(L=grid.L, N=n_red)
        spectrum = spectrum_reality(
            discretize_H(profile, reduced, stencil_order), count=eig_count)
    return ResidualReport(
        pseudo_hermiticity_residual=ph,
        pt_commutator_residual=pt,
        factorization_residual=fact,
        max_imag_eigenvalue=spectrum.max_imag_eigenvalue,
        boundary_layers_excluded=layers,
        spectrum=spectrum,
    )
