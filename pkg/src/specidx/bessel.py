"""Riccati-Bessel functions ``S_l(z) = z j_l(z)`` and ``C_l(z) = -z y_l(z)``.

With this sign choice ``S_0 = sin z`` and ``C_0 = cos z``.  Thin wrappers
over :mod:`scipy.special`.
"""

from __future__ import annotations

import numpy as np
from scipy import special


def riccati_s(ell: int, z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    return z * special.spherical_jn(ell, z)


def riccati_c(ell: int, z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if ell == 0:
        return np.cos(z)
    with np.errstate(invalid="ignore", over="ignore"):
        return -z * special.spherical_yn(ell, z)
