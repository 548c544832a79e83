import numpy as np
import pytest

from specidx.bessel import riccati_c, riccati_s


def test_low_orders_closed_form():
    z = np.linspace(0.1, 20, 50)
    assert np.allclose(riccati_s(0, z), np.sin(z))
    assert np.allclose(riccati_c(0, z), np.cos(z))
    assert np.allclose(riccati_s(1, z), np.sin(z) / z - np.cos(z))
    assert np.allclose(riccati_c(1, z), np.cos(z) / z + np.sin(z))


@pytest.mark.parametrize("ell", [0, 1, 3, 8])
def test_wronskian(ell):
    # C S' - S C' = 1 with these sign conventions
    z = np.linspace(0.3, 15, 40)
    d = 1e-5
    ds = (riccati_s(ell, z + d) - riccati_s(ell, z - d)) / (2 * d)
    dc = (riccati_c(ell, z + d) - riccati_c(ell, z - d)) / (2 * d)
    w = riccati_c(ell, z) * ds - riccati_s(ell, z) * dc
    assert np.allclose(w, 1.0, rtol=1e-6)
