import numpy as np
import pytest

from specidx import potentials as pot
from specidx.bsop import (a0_b0_1d, a0_b0_radial_d3, a0_norm_bound, assemble_bsmat, auto_nquad,
                          high_energy_threshold, hs_bound_d3, hs_bound_monte_carlo, min_singval,
                          s_wave_b0_eigenvalue, scan_singular_set, t0_eps_oracle)
from specidx.errors import BadQuadrature, DivergentBound, ThetaDegenerate


def test_matrices_symmetric_and_b0_rank_two(well8):
    op = a0_b0_1d(1.3, well8)
    assert np.allclose(op.a0, op.a0.T) and np.allclose(op.b0, op.b0.T)
    ev = np.linalg.eigvalsh(op.b0)
    assert np.all(ev > -1e-12)
    assert np.sum(ev > 1e-10 * ev.max()) == 2


def test_b0_trace_is_l1_over_2k(well8):
    lam = 2.0
    op = a0_b0_1d(lam, well8)
    assert np.trace(op.b0) == pytest.approx(well8.l1_norm() / (2 * np.sqrt(lam)), rel=1e-10)


def test_too_few_nodes(well8):
    with pytest.raises(BadQuadrature):
        a0_b0_1d(1.0, well8, nquad=16)


def test_nonpositive_energy(well8):
    with pytest.raises(ValueError):
        a0_b0_1d(0.0, well8)


def test_kink_corrected_a0_converges(well8):
    lo = np.linalg.eigvalsh(a0_b0_1d(1.0, well8, nquad=96).a0)
    hi = np.linalg.eigvalsh(a0_b0_1d(1.0, well8, nquad=192).a0)
    assert abs(lo[0] - hi[0]) < 1e-9 and abs(lo[-1] - hi[-1]) < 1e-9


def test_exponential_kink_at_origin_resolved():
    V = pot.exponential(3.0)
    a = np.linalg.eigvalsh(a0_b0_1d(0.7, V).a0)
    b = np.linalg.eigvalsh(a0_b0_1d(0.7, V, nquad=2 * auto_nquad(V, 0.7)).a0)
    assert abs(a[0] - b[0]) < 1e-8


def test_oracle_agreement_one_energy(well8):
    op = a0_b0_1d(1.0, well8, kink_correction=False)
    oracle = t0_eps_oracle(1.0, well8, nquad=op.n)
    assert np.linalg.norm(op.a0 + 1j * op.b0 - oracle, 2) < 1e-3


def test_radial_s_wave_b0_rank_one():
    V = pot.radial_gaussian(3.0)
    op = a0_b0_radial_d3(1.5, V, 0)
    ev = np.sort(np.abs(np.linalg.eigvalsh(op.b0)))
    assert ev[-1] == pytest.approx(s_wave_b0_eigenvalue(1.5, V), abs=1e-8)
    assert ev[-2] < 1e-10


def test_radial_needs_radial_potential_for_hs(well8):
    with pytest.raises(ValueError):
        hs_bound_d3(well8)


def test_theta_handling(well8):
    op = a0_b0_1d(1.0, well8)
    plain = assemble_bsmat(None, op)
    at_pi = assemble_bsmat(None, op, np.pi)
    assert np.allclose(plain.matrix, at_pi.matrix)
    for bad in (0.0, 2 * np.pi):
        with pytest.raises(ThetaDegenerate):
            assemble_bsmat(None, op, bad)
    with pytest.raises(ValueError):
        assemble_bsmat(np.full(op.n, 0.5), op)


def test_singular_set_flags_jump(well8):
    lams = np.array([2.0, 2.5848, 3.5])
    ss = scan_singular_set(well8, None, lams, tol_sing=1e-3)
    assert ss.flags.tolist() == [False, True, False]
    assert ss.min_singvals[1] < 1e-3


def test_min_singval_of_identity():
    from specidx.lattice import DenseSelfAdjoint
    assert min_singval(DenseSelfAdjoint(np.eye(3))) == 1.0


@pytest.mark.parametrize("depth", [1.0, 4.0])
def test_hs_bound_indicator_closed_form(depth):
    assert hs_bound_d3(pot.radial_indicator(depth)) == pytest.approx(depth**2 / 4, rel=1e-9)


def test_hs_bound_gaussian_closed_form():
    # int int e^{-|x|^2 - |y|^2} / |x - y|^2 = pi^3, divided by 16 pi^2
    assert hs_bound_d3(pot.radial_gaussian(2.0)) == pytest.approx(4.0 * np.pi / 16, rel=1e-8)


def test_hs_divergent():
    V = pot.PotentialSpec(eval=lambda r: -np.exp(-r), rho=2.0, support_radius=33.0, C=4.0,
                          radial=True)
    with pytest.raises(DivergentBound):
        hs_bound_d3(V)


def test_monte_carlo_consistent():
    V = pot.radial_indicator(2.0)
    est, se = hs_bound_monte_carlo(V, nsamples=200_000, seed=3)
    assert abs(est - 1.0) < 5 * se
    again, _ = hs_bound_monte_carlo(V, nsamples=200_000, seed=3)
    assert again == est


def test_high_energy_threshold(well8):
    het = high_energy_threshold(well8)
    assert het.lam_cert == pytest.approx((well8.l1_norm() / 2) ** 2)
    assert np.isfinite(het.lam_star) and het.lam_star <= het.lam_cert
    for lam, nrm in zip(het.ladder, het.norms):
        if lam >= het.lam_star:
            assert nrm < 1
    assert a0_b0_1d(het.lam_cert, well8).a0_norm() <= a0_norm_bound(well8, het.lam_cert)


def test_auto_nquad_grows_with_energy(well8):
    assert auto_nquad(well8, 100.0) > auto_nquad(well8, 1.0) >= 64
