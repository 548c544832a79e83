import numpy as np
import pytest

from specidx import potentials as pot
from specidx.errors import UnderResolved
from specidx.scatter1d import (build_flow_trace, eigenphases, high_energy_cutoff, kernel_dim_check,
                               mu_at, parity_phases, refine_crossing, smatrices, smatrix,
                               spectral_flow, spectral_flow_d5a, verify_thm_d1)


def test_zero_potential_gives_identity():
    s = smatrix(2.0, pot.zero())
    assert np.allclose(s.entries, np.eye(2))


def test_unitarity_and_reciprocity(well8):
    for s in smatrices([0.3, 2.0, 11.0], well8):
        assert s.unitarity_residual < 1e-8
        assert s.entries[0, 0] == s.t


def test_square_well_transmission():
    depth, width, lam = 3.0, 2.0, 1.7
    q = np.sqrt(lam + depth)
    T = 1 / (1 + depth**2 * np.sin(q * width) ** 2 / (4 * lam * (lam + depth)))
    s = smatrix(lam, pot.square_well(depth, width))
    assert abs(s.t) ** 2 == pytest.approx(T, rel=1e-8)


def test_poschl_teller_reflectionless():
    for s in smatrices([0.2, 1.0, 5.0], pot.poschl_teller(2.0)):
        assert abs(s.r_left) < 1e-8 and abs(s.r_right) < 1e-8
        assert abs(s.t) == pytest.approx(1.0, abs=1e-8)


def test_parity_phases_match_eigenphases(well8):
    lam = 1.3
    ph = np.sort(eigenphases(smatrix(lam, well8)))
    par = np.sort(np.mod(parity_phases(lam, well8), 2 * np.pi))
    assert np.allclose(ph, par, atol=1e-8)


def test_integrator_and_propagator_agree(well8):
    lams = [900.0]
    a = smatrices(lams, well8, method="rk")[0]
    b = smatrices(lams, well8, method="propagator")[0]
    assert np.abs(a.entries - b.entries).max() < 1e-8


def test_high_energy_cutoff(well8):
    lam = high_energy_cutoff(well8)
    assert np.linalg.norm(smatrix(lam, well8).entries - np.eye(2), 2) < 1e-3


@pytest.fixture(scope="module")
def trace8():
    return build_flow_trace(pot.gaussian(8.0), 0.05, include=(1.0, 5.0))


def test_flow_counts_bound_states(trace8):
    assert trace8.max_motion < 0.2 + 1e-12
    assert spectral_flow(trace8, np.pi) == -2
    assert [c[2] for c in trace8.crossings(np.pi)] == [-1, -1]


def test_subinterval_construction_agrees(trace8):
    for theta in (np.pi / 2, np.pi, 1.5 * np.pi):
        full = spectral_flow(trace8, theta)
        assert spectral_flow_d5a(trace8, theta, pick=0) == full
        assert spectral_flow_d5a(trace8, theta, pick=1) == full


def test_mu_at_uses_trace(trace8, well8):
    assert mu_at(np.pi, 1.0, well8, trace=trace8) == 2
    assert mu_at(np.pi, 5.0, well8, trace=trace8) == 0


def test_refine_and_kernel_dimension(trace8, well8):
    (lo, hi), _, _ = trace8.crossings(np.pi)[0]
    a, b = refine_crossing(well8, np.pi, lo, hi, width=1e-5)
    assert b - a <= 1e-5
    sv, dist = kernel_dim_check(0.5 * (a + b), np.pi, well8)
    assert sv < 1e-3 and dist < 1e-3


def test_xi_equals_minus_mu_on_coarse_grid(well8):
    rep = verify_thm_d1(well8, np.linspace(0.1, 8.0, 9))
    assert rep.violations == []
    assert [x for x in rep.xi] == [-m for m in rep.mu]


def test_under_resolved_reports_grid_size(well8, monkeypatch):
    from specidx import scatter1d
    # two grid points and no room to refine: the branches jump too far
    monkeypatch.setattr(scatter1d, "_initial_k_grid", lambda V, k0, k1: np.array([k0, k1]))
    with pytest.raises(UnderResolved) as info:
        build_flow_trace(well8, 0.05, lam_max=50.0, max_points=2)
    assert info.value.npoints == 2


def test_zero_potential_has_no_flow():
    tr = build_flow_trace(pot.zero(), 0.1, lam_max=4.0)
    assert spectral_flow(tr, np.pi) == 0
