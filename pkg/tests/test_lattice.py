"""Dense lattice operators and their residual diagnostics.

The pseudo-Hermiticity statement eta H eta^{-1} = H-dagger is checked as an
action residual on a fixed basket of Hermite-Gaussian probes: entrywise the
difference matrix carries O(1) boundary entries at any spacing (the eta
ratio's Taylor truncation divided by h^2), so the operator statement, not
the matrix difference, is the testable content.  H-dagger is built
independently from the parameter swap (beta1, beta2) -> (-beta2, -beta1),
never by transposing H.
"""
import numpy as np
import pytest

import ptpdem as pt
import pipelines


PROF0 = pipelines.demo_profile(0.0)


def _pseudo_residual(profile, grid):
    H = pt.discretize_H(profile, grid)
    Hd = pt.discretize_H_dagger(profile, grid)
    metric = pt.build_metric(profile, grid)
    return pt.pseudo_hermiticity_residual(H, Hd, metric)


def test_pseudo_hermiticity_residual_and_decay():
    coarse = _pseudo_residual(PROF0, pt.GridSpec(L=6.0, N=1001))
    fine = _pseudo_residual(PROF0, pt.GridSpec(L=6.0, N=2001))
    assert fine < 1e-6
    assert coarse / fine == pytest.approx(16.0, rel=0.3)  # 4th-order stencils


def test_pseudo_hermiticity_trivial_for_hermitian_profile():
    # beta1 = -beta2: eta = 1 and the swapped-parameter Hdag is H itself
    assert _pseudo_residual(pipelines.demo_profile(1.0),
                            pt.GridSpec(L=6.0, N=1001)) == 0.0


def test_pseudo_hermiticity_detects_wrong_metric():
    g = pt.GridSpec(L=6.0, N=1001)
    H = pt.discretize_H(PROF0, g)
    Hd = pt.discretize_H_dagger(PROF0, g)
    met = pt.build_metric(PROF0, g)
    xs = np.linspace(-g.L, g.L, g.N)
    bad = pt.MetricWeight(grid=met.grid, lambda_samples=met.lambda_samples,
                          eta_samples=met.eta_samples * np.exp(0.1 * xs ** 2))
    assert pt.pseudo_hermiticity_residual(H, Hd, bad) > 1e-2


def test_pt_commutator_residual_exact_and_control():
    g = pt.GridSpec(L=6.0, N=1001)
    assert pt.pt_commutator_residual(pt.discretize_H(PROF0, g)) == 0.0
    # odd potential breaks PT; built directly to bypass the validating
    # constructor, which would refuse it
    odd = pt.Profile(
        params=PROF0.params, mass=PROF0.mass,
        potential=pt.PotentialProfile(
            V=lambda x: np.asarray(x, dtype=float),
            V_prime=lambda x: np.ones_like(np.asarray(x, dtype=float)),
            descriptor="odd-control"))
    assert pt.pt_commutator_residual(pt.discretize_H(odd, g)) > 0.1


def test_adjoint_matches_transpose_action():
    # position-representation adjoint vs plain matrix transpose, as actions
    # on gentle wide probes (the fd commutation error of sharper probes
    # dominates otherwise)
    g = pipelines.grid()
    xs = np.linspace(-g.L, g.L, g.N)
    H = pt.discretize_H(PROF0, g)
    Hd = pt.discretize_H_dagger(PROF0, g)
    for k in range(4):
        probe = xs ** k * np.exp(-(xs / 2.0) ** 2)
        probe /= np.max(np.abs(probe))
        defect = Hd.entries @ probe - H.entries.T @ probe
        assert np.max(np.abs(defect[8:-8])) < 1e-8


def test_apply_hamiltonian_matches_closed_form_and_decays():
    # demo beta2 = 0 on psi = e^{-x^2/2}: H psi = (x^2 - 1)/2 psi exactly
    errs = {}
    for N in (1001, 2001):
        g = pt.GridSpec(L=8.0, N=N)
        xs = np.linspace(-g.L, g.L, N)
        psi = np.exp(-xs ** 2 / 2.0)
        out = pt.apply_hamiltonian(PROF0, g, psi)
        errs[N] = np.max(np.abs(out - 0.5 * (xs ** 2 - 1.0) * psi)[8:-8])
    assert errs[2001] < 1e-8
    assert errs[1001] / errs[2001] == pytest.approx(16.0, rel=0.3)


def test_apply_hamiltonian_agrees_with_dense_matrix():
    g = pt.GridSpec(L=6.0, N=801)
    xs = np.linspace(-g.L, g.L, g.N)
    psi = np.exp(-xs ** 2) * (1.0 + xs ** 2)
    H = pt.discretize_H(PROF0, g)
    # BLAS matvec and the stencil loop sum in different orders; this is
    # rounding agreement, not an analytic tolerance
    assert np.max(np.abs(pt.apply_hamiltonian(PROF0, g, psi) - H.entries @ psi)) < 1e-11


def test_hermitian_profile_gives_symmetric_matrix():
    H = pt.discretize_H(pipelines.demo_profile(1.0), pt.GridSpec(L=8.0, N=1201))
    assert np.max(np.abs(H.entries - H.entries.T)) == 0.0


def test_spectrum_hermitian_oscillator():
    # beta2 = 1 demo is a unit-mass oscillator with omega = 2 shifted by
    # hbar*beta1 = -1: levels 2n for n = 0, 1, 2, ...
    H = pt.discretize_H(pipelines.demo_profile(1.0), pt.GridSpec(L=8.0, N=1201))
    spec = pt.spectrum_reality(H, count=5)
    assert spec.hermitian_solve is True
    assert spec.max_imag_eigenvalue == 0.0
    assert spec.eigenvalues.real == pytest.approx([0.0, 2.0, 4.0, 6.0, 8.0],
                                                  abs=1e-4)


def test_ground_state_is_annihilated_by_lattice_H():
    g = pipelines.grid()
    psi0 = pipelines.demo_state(0.0).samples
    out = pt.apply_hamiltonian(PROF0, g, psi0)
    assert np.max(np.abs(out[8:-8])) < 1e-5


def test_factorization_residual_demo():
    g = pipelines.grid()
    pkg = pipelines.demo_ladder(0.0)
    probes = pt.random_smooth_basket(g, 8, seed=3)
    assert pt.factorization_residual(pkg, PROF0, g, probes) < 1e-8


def test_verify_profile_end_to_end():
    rep = pt.verify_profile(PROF0, pt.GridSpec(L=6.0, N=2001))
    assert rep.pseudo_hermiticity_residual < 1e-6
    assert rep.pt_commutator_residual == 0.0
    assert rep.factorization_residual < 1e-8
    assert rep.boundary_layers_excluded == 8
    assert rep.max_imag_eigenvalue < 1e-10
    # the similarity transform maps the demo member to a unit oscillator:
    # real eigenvalues n = 0, 1, 2, ... despite the non-symmetric matrix
    assert rep.spectrum.hermitian_solve is False
    assert rep.spectrum.eigenvalues.real[:5] == pytest.approx(
        [0.0, 1.0, 2.0, 3.0, 4.0], abs=1e-4)
