import pickle

import numpy as np
import pytest

from specidx import potentials as pot
from specidx.bsop import a0_b0_1d
from specidx.xindex import (UNDEFINED, XiCurve, XiPoint, bound_report, channel_truncated_xi,
                            evaluate, is_defined, xi_curve, xi_essential)


def test_weak_coupling_is_zero():
    V = pot.gaussian(0.1)
    curve = xi_curve(V, lam_grid=np.linspace(0.05, 10, 8))
    assert curve.xi == [0] * 8 and curve.jumps == []


def test_low_energy_limit_counts_bound_states(well8):
    assert xi_essential(0.05, well8) == -2


def test_high_energy_vanishes(well8):
    assert xi_essential(40.0, well8) == 0


def test_jumps_of_deep_well(well8):
    curve = xi_curve(well8, lam_grid=np.linspace(0.05, 6.0, 10))
    assert [(j.before, j.after) for j in curve.jumps] == [(-2, -1), (-1, 0)]
    assert curve.jumps[0].lo == pytest.approx(2.5848, abs=2e-4)
    assert curve.jumps[1].lo == pytest.approx(2.8489, abs=2e-4)
    for j in curve.jumps:
        assert j.hi - j.lo <= 1e-4 and j.size == 1


def test_undefined_inside_singular_set(well8):
    pt = evaluate(a0_b0_1d(2.58481, well8), tol=1e-3)
    assert pt.xi is UNDEFINED and not is_defined(pt.xi)
    assert pt.min_singval < 1e-3


def test_undefined_is_singleton():
    assert pickle.loads(pickle.dumps(UNDEFINED)) is UNDEFINED
    assert repr(UNDEFINED) == "UNDEFINED"


def test_repulsive_potential_nonnegative():
    V = pot.gaussian(-6.0)
    curve = xi_curve(V, lam_grid=np.linspace(0.1, 10.0, 8))
    assert all(x >= 0 for x in curve.xi if is_defined(x))
    assert bound_report(curve) == []


def test_mixed_sign_bounds_hold():
    V = pot.gaussian_mixture([6.0, -3.0], [-1.0, 1.5], [0.8, 1.0])
    curve = xi_curve(V, lam_grid=np.linspace(0.05, 12.0, 12))
    assert bound_report(curve) == []


def test_bound_report_flags_fabricated_violation():
    pt = XiPoint(lam=1.0, xi=3, min_singval=1.0, tol_sing=1e-6, a0_norm=0.5, lower=0, upper=1,
                 rank_minus=2, rank_plus=2)
    curve = XiCurve(lambdas=np.array([1.0]), xi=[3], fredholm_flags=np.array([True]),
                    min_singvals=np.array([1.0]), jumps=[], points=[pt])
    kinds = sorted(v.kind for v in bound_report(curve))
    assert kinds == ["operator", "rank"]


def test_grid_validation(well8):
    with pytest.raises(ValueError):
        xi_curve(well8, lam_grid=[1.0, 0.5])
    with pytest.raises(ValueError):
        xi_curve(well8, lam_grid=[0.0, 1.0])


def test_channel_truncation():
    V = pot.radial_indicator(10.0)
    low = channel_truncated_xi(0.1, V)
    assert low.value == -4
    assert low.per_channel[:2] == (-1, -1)
    assert channel_truncated_xi(20.0, V).value == 0
    assert low.tail_norm < 0.1
