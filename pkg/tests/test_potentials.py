import numpy as np
import pytest

from specidx import potentials as pot


@pytest.mark.parametrize("name", sorted(pot.BUILTINS))
def test_builtins_construct(name):
    from specidx.config import DEFAULT_PARAMS
    V = pot.from_name(name, **DEFAULT_PARAMS[name])
    x = V.sample_points(101)
    assert V(x).shape == x.shape
    assert V.support_radius > 0


def test_unknown_name():
    with pytest.raises(ValueError):
        pot.from_name("harmonic")


def test_envelope_violation_detected():
    with pytest.raises(ValueError, match="envelope"):
        pot.PotentialSpec(eval=lambda x: -np.ones_like(x), rho=2.0, support_radius=5.0, C=1.0)


def test_decay_exponent_must_exceed_one():
    with pytest.raises(ValueError):
        pot.PotentialSpec(eval=np.zeros_like, rho=1.0, support_radius=1.0, C=0.0)


def test_l1_norms():
    assert pot.square_well(3.0, 2.0).l1_norm() == pytest.approx(6.0, rel=1e-12)
    assert pot.gaussian(2.0, 1.5).l1_norm() == pytest.approx(2.0 * 1.5 * np.sqrt(np.pi), rel=1e-10)
    assert pot.exponential(3.0, 2.0).l1_norm() == pytest.approx(3.0, rel=1e-10)
    assert pot.poschl_teller(2.0, 1.0).l1_norm() == pytest.approx(4.0, rel=1e-10)


def test_sign_definite():
    assert pot.gaussian(1.0).sign_definite() == -1
    assert pot.gaussian(-1.0).sign_definite() == 1
    mixed = pot.gaussian_mixture([1.0, -1.0], [-1.0, 1.0], [0.5, 0.5])
    assert mixed.sign_definite() == 0
    assert pot.zero().is_zero


def test_support_radius_cuts_at_relative_threshold():
    V = pot.gaussian(5.0, 1.0)
    R = V.support_radius
    assert abs(V(R)) == pytest.approx(5.0 * 1e-14, rel=1e-6)


def test_table_interpolates_and_vanishes_outside():
    V = pot.tabulated([-1.0, 0.0, 1.0], [0.0, -2.0, 0.0])
    assert V(0.5) == pytest.approx(-1.0)
    assert V(3.0) == 0.0
    assert V.breakpoints == (-1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        pot.tabulated([0.0, 0.0], [1.0, 1.0])


def test_radial_flags():
    V = pot.radial_indicator(3.0, 2.0)
    assert V.radial and V.rho == 3.0
    assert V(1.0) == -3.0 and V(2.5) == 0.0


def test_describe():
    assert pot.square_well(1.0, 2.0).describe()["name"] == "square_well"
