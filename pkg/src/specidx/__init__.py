"""Spectral index of Schrodinger pairs on the essential spectrum.

Several independent routes to the index ``xi(lam; H, H0)`` of a pair of
spectral projections for ``H = H0 + V``:

* ``lattice``: finite-difference operators, direct projection index and the
  classical Birman-Schwinger count below the spectrum;
* ``bsop`` / ``xindex``: the limiting Birman-Schwinger matrix
  ``J^{-1} + A0(lam)`` on the essential spectrum;
* ``scatter1d``: spectral flow of the scattering matrix eigenphases;
* ``krein``: a rank-one example where the index exists nowhere.
"""

from .errors import SpecIdxError
from .potentials import PotentialSpec, from_name
from .projpair import OrthProjection, index_pair
from .xindex import UNDEFINED, is_defined, xi_curve, xi_essential

__version__ = "0.1.0"

__all__ = [
    "SpecIdxError",
    "PotentialSpec",
    "from_name",
    "OrthProjection",
    "index_pair",
    "UNDEFINED",
    "is_defined",
    "xi_curve",
    "xi_essential",
    "__version__",
]
