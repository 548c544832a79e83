import numpy as np
import pytest

from specidx import potentials as pot
from specidx.errors import EigenvalueAtThreshold, SingularShift, SupportExceedsBox
from specidx.lattice import (DenseSelfAdjoint, Grid1D, bs_bound_states, bs_matrix, build_h,
                             build_h0, counting, resolvent_identity_residual, t0_matrix, xi_bs,
                             xi_direct)


def test_free_spectrum_matches_sine_modes(grid400, h0_400):
    h, n = grid400.h, grid400.n
    j = np.arange(1, n + 1)
    exact = 4 / h**2 * np.sin(j * np.pi / (2 * (n + 1))) ** 2
    assert np.allclose(h0_400.eigenvalues, exact, rtol=1e-10)


def test_box_too_small():
    with pytest.raises(SupportExceedsBox):
        build_h(Grid1D(-2.0, 2.0, 100), pot.gaussian(1.0))


def test_square_well_ground_state():
    # depth 2, width 2: even state with kappa = k tan(k), k^2 + kappa^2 = 2
    from scipy.optimize import brentq
    k = brentq(lambda k: k * np.tan(k) - np.sqrt(2 - k * k), 0.1, 1.2)
    # no grid point on the jumps at +-1, so the error is O(h^2)-like
    grid = Grid1D(-8.0, 8.0, 1598)
    H = build_h(grid, pot.square_well(2.0, 2.0))
    assert H.eigenvalues[0] == pytest.approx(-(2 - k * k), abs=1e-3)


def test_threshold_guard(h0_400):
    ev = h0_400.eigenvalues[3]
    with pytest.raises(EigenvalueAtThreshold):
        counting(h0_400, ev)


def test_zero_potential_gives_zero_index(grid400, h0_400):
    H = build_h(grid400, pot.zero())
    assert xi_direct(h0_400, H, 0.7) == 0


def test_direct_index_counts_bound_states(grid400, h0_400):
    V = pot.gaussian(8.0)
    H = build_h(grid400, V)
    nb = int(np.sum(H.eigenvalues < 0))
    assert nb == 2
    assert xi_direct(h0_400, H, -0.01) == -nb
    assert xi_bs(h0_400, V, -0.01) == -nb


def test_resolvent_identity(grid400, h0_400):
    V = pot.gaussian_mixture([1.0, -0.8], [-1.0, 2.0], [1.0, 0.7])
    H = build_h(grid400, V)
    for z in (1j, 1 + 1j, -2.0):
        assert resolvent_identity_residual(h0_400, H, V, z) < 1e-10


def test_singular_shift(grid400, h0_400):
    V = pot.gaussian(1.0)
    with pytest.raises(SingularShift):
        t0_matrix(h0_400, V, float(h0_400.eigenvalues[0]))


def test_bs_matrix_self_adjoint(h0_400):
    M = bs_matrix(h0_400, pot.gaussian(2.0), -0.3)
    assert np.allclose(M.matrix, M.matrix.T)


def test_bound_states_attractive_and_mixed(grid400, h0_400):
    for V in (pot.square_well(5.0, 3.0),
              pot.gaussian_mixture([4.0, -2.0], [-2.0, 1.5], [1.0, 0.6])):
        lattice = [e for e in build_h(grid400, V).eigenvalues if e < 0]
        states = bs_bound_states(h0_400, V)
        assert len(states) == len(lattice) >= 1
        assert np.allclose(states, lattice, atol=1e-8)


def test_repulsive_has_no_bound_states(h0_400):
    assert bs_bound_states(h0_400, pot.gaussian(-3.0)) == []


def test_poschl_teller_second_order():
    V = pot.poschl_teller(2.0, 1.0)
    errs = []
    for n in (199, 399):
        errs.append(abs(bs_bound_states(build_h0(Grid1D(-20.0, 20.0, n)), V)[0] + 1.0))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.05)


def test_dense_operator_validates():
    with pytest.raises(ValueError):
        DenseSelfAdjoint(np.array([[0.0, 1.0], [0.0, 0.0]]))
