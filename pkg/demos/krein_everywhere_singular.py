"""A rank-one perturbation whose Birman-Schwinger matrix vanishes on the
whole spectrum.

With H0 = (-d^2/dx^2 + 1)^{-1} on the half-line (Dirichlet at 0) and
G f = <f, e^{-x}>, the boundary value of G (H0 - lam - i0)^{-1} G* is
-1 + i sqrt(1/lam - 1).  With J = 1 the matrix 1 + A0(lam) is zero for
every lam in (0, 1), so the index is undefined everywhere there.

Run:  python3 demos/krein_everywhere_singular.py
"""

import numpy as np

from specidx.krein import krein_degenerate_scan, krein_eval

print(f"{'lambda':>7} {'numeric T0':>26} {'closed form':>26} {'|err|':>9}")
for lam in np.linspace(0.1, 0.9, 9):
    e = krein_eval(lam)
    print(f"{lam:7.2f} {e.t0_numeric.real:12.6f}{e.t0_numeric.imag:+12.6f}i "
          f"{e.t0_closed.real:12.6f}{e.t0_closed.imag:+12.6f}i {e.abs_err:9.2e}")

worst = krein_degenerate_scan(np.linspace(0.05, 0.95, 20))
print(f"\nmax |1 + A0(lam)| over 20 energies: {worst:.2e}")
