import numpy as np
import pytest

from specidx import potentials as pot
from specidx.bsop import a0_b0_1d, assemble_bsmat, min_singval
from specidx.errors import OutOfRange
from specidx.krein import (krein_degenerate_scan, krein_eval, krein_h0_spectrum, krein_t0_closed,
                           krein_t0_numeric)


def test_closed_form():
    assert krein_t0_closed(0.5) == complex(-1, 1)
    with pytest.raises(OutOfRange):
        krein_t0_closed(1.0)


@pytest.mark.parametrize("lam", [0.2, 0.5, 0.8])
def test_numeric_matches_closed(lam):
    v = krein_t0_numeric(lam)
    assert abs(v.real + 1) < 1e-3
    assert abs(v.imag - np.sqrt(1 / lam - 1)) < 1e-3


def test_real_part_near_top_of_spectrum():
    assert abs(krein_t0_numeric(0.9).real + 1) < 1e-3


def test_first_order_in_eps():
    lam = 0.5
    exact = krein_t0_closed(lam)
    errs = [abs(krein_t0_numeric(lam, eps_seq=(e,), probe=False) - exact) for e in (0.02, 0.01)]
    assert errs[0] / errs[1] == pytest.approx(2.0, rel=0.2)
    assert krein_eval(lam).abs_err < errs[1] / 10


def test_scan_routes():
    assert krein_degenerate_scan(np.linspace(0.1, 0.9, 5), route="closed") == 0.0
    assert krein_degenerate_scan(np.linspace(0.1, 0.9, 5)) < 1e-3
    with pytest.raises(OutOfRange):
        krein_degenerate_scan([0.5, 1.2])


def test_generic_well_is_not_degenerate(well8):
    # away from its two jump brackets a Gaussian well keeps J + A0 invertible
    sv = [min_singval(assemble_bsmat(None, a0_b0_1d(lam, well8))) for lam in (0.5, 1.5, 4.0)]
    assert min(sv) > 1e-2


def test_h0_spectrum_in_unit_interval():
    ev = krein_h0_spectrum()
    assert ev.min() > 0 and ev.max() < 1


def test_argument_checks():
    with pytest.raises(OutOfRange):
        krein_t0_numeric(0.0)
    with pytest.raises(ValueError):
        krein_t0_numeric(0.5, n=3000)
