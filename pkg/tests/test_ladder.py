"""Ladder factorization: scale function, superpotentials, deformed pair.

Demo-family closed forms (m = 1, hbar = 1, beta1 = -1, omega^2 = 4 beta2):
phi_minus = 2x, u0 = 2(beta2 - 1)x, phi_plus = 2 beta2 x, Phi = (1+beta2)x,
commutator field = (1+beta2).
"""
import numpy as np
import pytest

import ptpdem as pt
import pipelines


GRID = pipelines.grid()
XS = np.linspace(-GRID.L, GRID.L, GRID.N)


@pytest.mark.parametrize("beta2", [0.0, 0.5, 1.0])
def test_demo_closed_forms_and_residual(beta2):
    pkg = pipelines.demo_ladder(beta2)
    assert pkg.phi_minus.residual_norm < 1e-10
    assert np.max(np.abs(pkg.phi_minus.field_samples - 2.0 * XS)) < 1e-11
    assert np.max(np.abs(pkg.u0 - 2.0 * (beta2 - 1.0) * XS)) < 1e-12
    assert np.max(np.abs(pkg.phi_plus - 2.0 * beta2 * XS)) < 1e-11
    assert pkg.lambda0 == 0.0
    assert pkg.a_plus_tag == "i*a_minus"


def test_scale_function_squares_to_hbar_over_sqrt_m():
    pkg = pipelines.demo_ladder(0.0)
    assert np.max(np.abs(pkg.a_minus ** 2 - 1.0)) == 0.0
    pdem = pipelines.pdem_ladder()
    assert np.max(np.abs(pdem.a_minus ** 2 - np.sqrt(1.0 + XS ** 2))) < 1e-12


def test_superpotential_offset_identity():
    # phi_plus - phi_minus = u0 at every node
    for pkg in (pipelines.demo_ladder(0.5), pipelines.pdem_ladder()):
        gap = pkg.phi_plus - pkg.phi_minus.field_samples - pkg.u0
        assert np.max(np.abs(gap)) < 1e-12


def test_large_beta2_residual_gate():
    # at the pinned integrator tolerances the measured ODE residual for
    # beta2 = 5 sits near 2e-8 (solution error ~2e-10); the default gate
    # refuses it, the relaxed gate documents it
    with pytest.raises(pt.ResidualTooLarge):
        pt.build_ladder(pipelines.demo_profile(5.0), GRID)
    pkg = pipelines.demo_ladder(5.0)
    assert np.max(np.abs(pkg.phi_minus.field_samples - 2.0 * XS)) < 1e-9


def test_hermitian_member_degenerates():
    pkg = pipelines.demo_ladder(1.0)
    assert np.max(np.abs(pkg.u0)) == 0.0
    assert np.max(np.abs(pkg.phi_plus - pkg.phi_minus.field_samples)) == 0.0


def test_deformed_observables_closed_forms():
    obs = pt.deformed_observables(pipelines.demo_ladder(0.5))
    assert np.max(np.abs(obs.Phi - 1.5 * XS)) < 1e-10
    assert np.max(np.abs(obs.commutator_field - 1.5)) < 1e-9


def test_analytic_derivative_helpers():
    pkg = pipelines.demo_ladder(0.0)
    assert np.max(np.abs(pt.phi_minus_prime(pkg) - 2.0)) < 1e-10
    # u0' = 2 sigma (sqrt(m) + x m' / (2 sqrt m)) = -2 for the demo
    assert pt.u0_prime(pipelines.demo_profile(0.0), 0.3) == pytest.approx(-2.0)


def test_annihilates_ground_state():
    # psi0 is analytic (e^{-x^2} for m = hbar = 1); the residual is pure fd
    # truncation of the derivative inside A-, so halved spacing buys 16x
    pkg = pipelines.demo_ladder(0.0, N=4001)
    xs = np.linspace(-GRID.L, GRID.L, 4001)
    acted = pt.apply_A_minus(pkg, np.exp(-xs ** 2))
    assert np.max(np.abs(acted[8:-8])) < 1e-9


def test_coherent_eigenvector_under_fd_application():
    pkg = pipelines.demo_ladder(0.0)
    state = pipelines.demo_state(0.0, alpha=1.0 + 0.0j)
    acted = pt.apply_A_minus(pkg, state.samples)
    defect = acted - state.alpha * state.samples
    assert np.max(np.abs(defect[8:-8])) < 1e-8


def test_commutator_application_matches_field():
    pkg = pipelines.demo_ladder(0.0)
    field = pt.deformed_observables(pkg).commutator_field
    worst = 0.0
    for f in pt.hermite_gaussian_basket(GRID, count=4):
        comm = (pt.apply_A_minus(pkg, pt.apply_A_plus(pkg, f))
                - pt.apply_A_plus(pkg, pt.apply_A_minus(pkg, f)))
        worst = max(worst, np.max(np.abs(comm - field * f)[8:-8]))
    assert worst < 1e-6


def test_ladder_identities_bruteforce():
    probes = pt.hermite_gaussian_basket(GRID, count=8)
    demo = pipelines.demo_ladder(0.0)
    for tag in pt.oracles.IDENTITY_TAGS:
        assert pt.operator_identity_bruteforce(demo, tag, probes) < 1e-6
    hermitian = pipelines.demo_ladder(1.0)
    assert pt.operator_identity_bruteforce(hermitian, "eq50", probes) < 1e-6


def test_flat_adjoint_reduction_hermitian_case():
    # for beta1 = -beta2, <A- f, g>_flat = <f, A+ g>_flat
    pkg = pipelines.demo_ladder(1.0)
    metric = pipelines.demo_metric(1.0)
    basket = pt.hermite_gaussian_basket(GRID, count=4)
    for f in basket:
        for g in basket:
            lhs = pt.inner_product(pt.apply_A_minus(pkg, f), g, metric, "flat")
            rhs = pt.inner_product(f, pt.apply_A_plus(pkg, g), metric, "flat")
            assert lhs == pytest.approx(rhs, abs=1e-8)


def test_Pi_action_matches_apply():
    pkg = pipelines.demo_ladder(0.5)
    obs = pt.deformed_observables(pkg)
    f = pt.hermite_gaussian_basket(GRID, count=3)[2]
    direct = pt.apply_Pi(pkg, f)
    via_obs = obs.Pi_action(f)
    assert np.max(np.abs(direct - via_obs)) == 0.0
