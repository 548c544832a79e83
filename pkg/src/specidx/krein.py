"""Krein's example: a rank-one perturbation whose singular set is everything.

``h0 = -d^2/dx^2`` on the half-line with a Dirichlet condition, ``H0 =
(h0 + I)^{-1}`` (spectrum ``[0, 1]``) and ``G f = int_0^inf f(x) e^{-x} dx``.
Then ``T0(lam + i0) = -1 + i sqrt(1/lam - 1)`` on ``(0, 1)``, so
``A0(lam) = -1`` and with ``J = 1`` the matrix ``J^{-1} + A0(lam)`` vanishes
identically.

Numerically, with ``z = lam + i eps`` and ``B = h0 + 1``::

    (H0 - z)^{-1} = -1/z - (1/z^2) (B - 1/z)^{-1}

so only shifted solves against the Dirichlet lattice Laplacian are needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal, solve_banded

from .errors import BoxTooSmall, OutOfRange
from .parallel import pmap
from .quadrature import richardson


def krein_t0_closed(lam: float) -> complex:
    """``-1 + i sqrt(1/lam - 1)`` for ``0 < lam < 1``."""
    if not 0 < lam < 1:
        raise OutOfRange(f"closed form holds on (0, 1), got lam={lam}")
    return complex(-1.0, np.sqrt(1.0 / lam - 1.0))


def _form(z: complex, X: float, h: float) -> complex:
    n = int(round(X / h)) - 1
    hh = X / (n + 1)
    x = hh * np.arange(1, n + 1)
    g = np.exp(-x)
    shift = 1.0 - 1.0 / z
    ab = np.empty((3, n), dtype=complex)
    ab[0] = -1.0 / hh**2
    ab[1] = 2.0 / hh**2 + shift
    ab[2] = -1.0 / hh**2
    u = solve_banded((1, 1), ab, g.astype(complex), check_finite=False)
    # trapezoid on [0, X]; u vanishes at both ends, g(0) = 1
    g_norm2 = hh * (0.5 + np.sum(g * g) + 0.5 * np.exp(-2 * X))
    return complex(-g_norm2 / z - hh * np.sum(u * g) / z**2)


def default_eps_seq(lam: float, count: int = 3):
    d = min(lam, 1.0 - lam)
    return tuple(0.1 * d * 2.0 ** (-m) for m in range(count))


def _box(lam: float, eps: float, box_c: float) -> float:
    z = complex(lam, eps)
    q = np.sqrt(-(1.0 - 1.0 / z))       # decaying root: Im q > 0
    q = q if q.imag > 0 else -q
    return box_c / q.imag


def krein_t0_numeric(lam: float, X: float | None = None, n: int | None = None, eps_seq=None,
                     h: float = 0.005, box_c: float = 10.0, target: float = 1e-4,
                     probe: bool = True) -> complex:
    """Richardson-extrapolated ``<(H0 - lam - i eps)^{-1} g, g>`` as ``eps -> 0``.

    Parameters
    ----------
    lam : float
        Energy in ``(0, 1)``.
    X : float, optional
        Box length; by default chosen per ``eps`` so that waves reaching the
        wall are damped by ``exp(-box_c)``, and never below 40.
    n : int, optional
        Number of interior lattice points; overrides ``h`` (and requires ``X``).
    eps_seq : sequence of float, optional
        Halving sequence; default ``0.1 min(lam, 1 - lam) (1, 1/2, 1/4)``.
    probe : bool
        Redo the smallest ``eps`` on a doubled box; raise :class:`BoxTooSmall`
        if that moves the result by more than ``10 * target``.
    """
    if not 0 < lam < 1:
        raise OutOfRange(f"lam must lie in (0, 1), got {lam}")
    if n is not None:
        if X is None:
            raise ValueError("n requires an explicit X")
        if n < 2000 or X < 40:
            raise ValueError("need X >= 40 and n >= 2000")
        h = X / (n + 1)
    eps_seq = tuple(eps_seq) if eps_seq is not None else default_eps_seq(lam)

    def box(eps):
        return X if X is not None else max(40.0, _box(lam, eps, box_c))

    vals = [_form(complex(lam, e), box(e), h) for e in eps_seq]
    if probe:
        e = eps_seq[-1]
        moved = abs(_form(complex(lam, e), 2 * box(e), h) - vals[-1])
        if moved > 10 * target:
            raise BoxTooSmall(f"doubling the box moved T0 by {moved:.2e}")
    if len(vals) == 1:
        return complex(vals[0])
    return complex(richardson(vals, ratio=eps_seq[0] / eps_seq[1], order=1))


@dataclass(frozen=True)
class KreinEval:
    lam: float
    t0_closed: complex
    t0_numeric: complex
    abs_err: float


def krein_eval(lam: float, **kw) -> KreinEval:
    c = krein_t0_closed(lam)
    v = krein_t0_numeric(lam, **kw)
    return KreinEval(lam=float(lam), t0_closed=c, t0_numeric=v, abs_err=abs(v - c))


def krein_degenerate_scan(lam_grid, route: str = "numeric", workers: int | None = None,
                          **kw) -> float:
    """``max |1 + A0(lam)|`` over the grid (``J = 1``)."""
    lams = np.asarray(lam_grid, dtype=float)
    if np.any((lams <= 0) | (lams >= 1)):
        raise OutOfRange("grid must lie inside (0, 1)")
    if route == "closed":
        vals = [krein_t0_closed(l).real for l in lams]
    elif route == "numeric":
        vals = [v.real for v in pmap(lambda l: krein_t0_numeric(l, **kw), lams, workers)]
    else:
        raise ValueError(f"unknown route {route!r}")
    return float(np.max(np.abs(1.0 + np.asarray(vals))))


def krein_h0_spectrum(X: float = 40.0, n: int = 2000) -> np.ndarray:
    """Eigenvalues of the discretised ``(h0 + 1)^{-1}``, ascending."""
    h = X / (n + 1)
    ev_h0 = eigvalsh_tridiagonal(np.full(n, 2.0 / h**2), np.full(n - 1, -1.0 / h**2))
    return np.sort(1.0 / (ev_h0 + 1.0))
