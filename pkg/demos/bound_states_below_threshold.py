"""Below the spectrum the index counts bound states, and the count can be
read off the free resolvent sandwiched by |V|^(1/2) alone.

For a lattice Hamiltonian on (-20, 20) this compares three numbers at a few
negative energies: the eigenvalue count difference, the projection-pair
index, and the inertia of J + T0(lam).  Bound states located by bisecting
T0 are then compared with direct diagonalisation.

Run:  python3 demos/bound_states_below_threshold.py
"""

import numpy as np

from specidx import potentials as pot
from specidx.lattice import (Grid1D, bs_bound_states, build_h, build_h0, counting, xi_bs,
                             xi_direct)

grid = Grid1D(-20.0, 20.0, 800)
H0 = build_h0(grid)
wells = {
    "square well 6 x 2": pot.square_well(6.0, 2.0),
    "mixed Gaussians": pot.gaussian_mixture([6.0, -3.0], [-1.0, 1.5], [0.8, 1.0]),
}

for name, V in wells.items():
    H = build_h(grid, V)
    print(name)
    for lam in (-3.0, -1.0, -0.1):
        diff = counting(H0, lam) - counting(H, lam)
        print(f"  lam={lam:5.1f}  counts {diff:3d}   pair index {xi_direct(H0, H, lam):3d}"
              f"   BS inertia {xi_bs(H0, V, lam):3d}")
    direct = H.eigenvalues[H.eigenvalues < 0]
    via_t0 = np.array(bs_bound_states(H0, V))
    print("  bound states:", np.round(via_t0, 8), " max diff", np.abs(direct - via_t0).max())
