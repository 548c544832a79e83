"""Deep Gaussian well: the index from the Birman-Schwinger matrix and from
the scattering phases, side by side.

The well -8 exp(-x^2) binds two states, so just above the threshold the
index is -2.  As the energy grows, two eigenphases of S(lam) cross -1
clockwise and the index climbs back to 0.  Each jump of xi sits inside the
bracket of one crossing.

Run:  python3 demos/deep_well_index.py
"""

import numpy as np

from specidx import potentials as pot
from specidx.scatter1d import build_flow_trace, refine_crossing
from specidx.xindex import xi_curve

V = pot.gaussian(8.0, 1.0)
lams = np.linspace(0.05, 6.0, 25)

curve = xi_curve(V, lam_grid=lams)
trace = build_flow_trace(V, float(lams[0]), include=lams)
suffix = trace.suffix_flow(np.pi)

print(f"{'lambda':>8} {'xi':>4} {'-mu(-1)':>8} {'min sv':>10}")
for lam, x, sv in zip(curve.lambdas, curve.xi, curve.min_singvals):
    mu = -int(suffix[trace.index_of(lam)])
    print(f"{lam:8.3f} {x!s:>4} {-mu:>8d} {sv:10.3e}")

print("\njump brackets of xi:")
for j in curve.jumps:
    print(f"  [{j.lo:.5f}, {j.hi:.5f}]  {j.before} -> {j.after}")

print("eigenphase crossings of -1:")
for (lo, hi), _, sgn in trace.crossings(np.pi, 0, trace.index_of(float(lams[-1]))):
    a, b = refine_crossing(V, np.pi, lo, hi)
    print(f"  [{a:.5f}, {b:.5f}]  {'anticlockwise' if sgn > 0 else 'clockwise'}")
