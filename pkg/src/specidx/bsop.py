"""Limiting Birman-Schwinger operators on the positive half-line of energies.

For ``lam > 0`` the sandwiched free resolvent ``G (H0 - lam - i0)^{-1} G``
splits into ``A0 + i B0``.  In one dimension the outgoing kernel is
``i exp(ik|x-y|) / (2k)``, so

* ``A0(x, y) = -G(x) sin(k|x-y|) / (2k) G(y)`` (kink on the diagonal),
* ``B0(x, y) =  G(x) cos(k(x-y)) / (2k) G(y)`` (smooth, rank two).

For a radial potential in three dimensions each partial wave ``l`` is a
half-line problem with kernel ``S_l(k r<) [C_l(k r>) + i S_l(k r>)] / k``
built from Riccati-Bessel functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from numpy.polynomial.legendre import leggauss

from . import bessel
from .errors import BadQuadrature, BoxTooSmall, DivergentBound, ThetaDegenerate
from .lattice import DenseSelfAdjoint
from .potentials import PotentialSpec
from .quadrature import PanelRule, nystrom_matrix, panel_rule, richardson

MIN_NQUAD = 32
COT_MAX = 1e12


@dataclass(frozen=True, eq=False)
class BSOperator:
    """Nyström matrices of ``A0(lam)`` and ``B0(lam)`` on a panel rule.

    Matrices act on ``W^(1/2)``-scaled nodal values, so their eigenvalues
    approximate those of the integral operators.
    """

    a0: np.ndarray
    b0: np.ndarray
    lam: float
    k: float
    weights: np.ndarray
    nodes: np.ndarray
    sign: np.ndarray            # sign V at the nodes, sign(0) = +1
    channel: int | None = None
    rule: PanelRule | None = field(default=None, repr=False)
    g: np.ndarray | None = field(default=None, repr=False)   # |V|^(1/2) at the nodes

    @property
    def n(self) -> int:
        return self.a0.shape[0]

    def a0_norm(self) -> float:
        if self.n == 0:
            return 0.0
        return float(np.max(np.abs(sla.eigvalsh(self.a0))))

    def b0_norm(self) -> float:
        if self.n == 0:
            return 0.0
        return float(np.max(np.abs(sla.eigvalsh(self.b0))))


def _sign(v):
    return np.where(np.asarray(v) >= 0, 1.0, -1.0)


def auto_nquad(V: PotentialSpec, lam: float, base: int = 64) -> int:
    """Node count that resolves both the potential and the oscillation at ``k``.

    16-node panels are kept at most ``min(2, 6/k)`` wide, so each panel sees
    about one oscillation at most.
    """
    k = np.sqrt(max(lam, 0.0))
    length = V.support_radius * (1 if V.radial else 2)
    width = min(2.0, 6.0 / max(k, 1e-12))
    npan = int(np.ceil(length / width)) + len(V.breakpoints)
    return max(base, 16 * npan)


def _check_nquad(nquad):
    if nquad < MIN_NQUAD:
        raise BadQuadrature(f"nquad={nquad} below the minimum {MIN_NQUAD}")


def _empty_op(lam, rule, channel=None):
    n = rule.nodes.size
    z = np.zeros((n, n))
    return BSOperator(a0=z, b0=z.copy(), lam=lam, k=float(np.sqrt(lam)), weights=rule.weights,
                      nodes=rule.nodes, sign=np.ones(n), channel=channel, rule=rule,
                      g=np.zeros(n))


def a0_b0_1d(lam: float, V: PotentialSpec, nquad: int | None = None,
             kink_correction: bool = True) -> BSOperator:
    """Nyström discretisation of ``A0(lam)``, ``B0(lam)`` for a potential on the line.

    Parameters
    ----------
    lam : float
        Energy, > 0.
    V : PotentialSpec
    nquad : int, optional
        Number of Gauss-Legendre nodes on ``[-R, R]`` (rounded up to whole
        16-node panels).  Defaults to :func:`auto_nquad`.
    kink_correction : bool
        Product-integrate the diagonal kink of the ``A0`` kernel.  With
        ``False`` the plain ``W^(1/2) K W^(1/2)`` form is returned, which only
        converges algebraically.
    """
    if not lam > 0:
        raise ValueError(f"lam must be positive, got {lam}")
    if nquad is None:
        nquad = auto_nquad(V, lam)
    _check_nquad(nquad)
    R = V.support_radius
    rule = panel_rule(-R, R, nquad, V.breakpoints)
    if V.is_zero:
        return _empty_op(lam, rule)
    k = np.sqrt(lam)
    g = lambda x: np.sqrt(np.abs(V(x)))
    a0 = nystrom_matrix(lambda x, y: -np.sin(k * np.abs(x - y)) / (2 * k), g, rule,
                        kink=kink_correction)
    b0 = nystrom_matrix(lambda x, y: np.cos(k * (x - y)) / (2 * k), g, rule, kink=False)
    return BSOperator(a0=a0, b0=b0, lam=float(lam), k=float(k), weights=rule.weights,
                      nodes=rule.nodes, sign=_sign(V(rule.nodes)), rule=rule, g=g(rule.nodes))


def radial_kernels(ell: int, k: float):
    """``(Re G, Im G)`` of the channel-``ell`` outgoing free resolvent."""

    def re(r, s):
        lo, hi = np.minimum(r, s), np.maximum(r, s)
        return bessel.riccati_s(ell, k * lo) * bessel.riccati_c(ell, k * hi) / k

    def im(r, s):
        return bessel.riccati_s(ell, k * r) * bessel.riccati_s(ell, k * s) / k

    return re, im


def a0_b0_radial_d3(lam: float, V: PotentialSpec, ell: int = 0, nquad: int | None = None,
                    kink_correction: bool = True) -> BSOperator:
    """Channel-``ell`` operators for a radial potential in three dimensions."""
    if not lam > 0:
        raise ValueError(f"lam must be positive, got {lam}")
    if ell < 0:
        raise ValueError("ell must be >= 0")
    if not V.radial:
        raise ValueError("a radial potential is required")
    if nquad is None:
        nquad = auto_nquad(V, lam)
    _check_nquad(nquad)
    rule = panel_rule(0.0, V.support_radius, nquad, V.breakpoints)
    if V.is_zero:
        return _empty_op(lam, rule, channel=ell)
    k = np.sqrt(lam)
    g = lambda r: np.sqrt(np.abs(V(r)))
    re, im = radial_kernels(ell, k)
    a0 = nystrom_matrix(re, g, rule, kink=kink_correction)
    b0 = nystrom_matrix(im, g, rule, kink=False)
    return BSOperator(a0=a0, b0=b0, lam=float(lam), k=float(k), weights=rule.weights,
                      nodes=rule.nodes, sign=_sign(V(rule.nodes)), channel=ell, rule=rule,
                      g=g(rule.nodes))


def s_wave_b0_eigenvalue(lam: float, V: PotentialSpec, n: int = 4000) -> float:
    """``(1/k) int |V(r)| sin^2(kr) dr`` by an independent fine panel rule."""
    k = np.sqrt(lam)
    rule = panel_rule(0.0, V.support_radius, n, V.breakpoints)
    r = rule.nodes
    return float(np.sum(rule.weights * np.abs(V(r)) * np.sin(k * r) ** 2) / k)


# ----------------------------------------------------------------------------
# epsilon -> 0 oracle

def _chain_schur(d, o2):
    """Schur complement seen from the end of a tridiagonal chain.

    ``d`` is the diagonal ordered from the Dirichlet wall inwards and ``o2``
    the squared (constant) coupling.  Returns ``s_m`` with ``s_1 = d_1`` and
    ``s_m = d_m - o2 / s_{m-1}``, i.e. the pivot left after eliminating the
    whole chain.  A constant diagonal is handled as a power of the Möbius
    matrix, normalised so that nothing overflows.
    """
    if d.size == 0:
        return None
    if np.all(d == d[0]):
        scale = np.sqrt(o2)
        mob = np.array([[d[0] / scale, -1.0], [1.0, 0.0]])
        p, q = np.linalg.matrix_power(mob, d.size - 1) @ np.array([d[0] / scale, 1.0])
        return scale * p / q
    s = d[0]
    for dm in d[1:]:
        s = dm - o2 / s
    return s


def _lattice_kernel(nodes, lam, eps, a0, L, h, ell=None):
    """Kernel of ``(H0 - lam - i eps)^{-1}`` on a lattice, interpolated to ``nodes``.

    The lattice has spacing ``~h`` on ``[a0, L]`` with Dirichlet ends.  Index 0
    and ``N+1`` are the boundary (value 0).  The chains of lattice points
    outside the window around ``nodes`` are eliminated exactly by Schur
    complements, so the banded solve only runs over the window.  The value at
    ``(x, y)`` is interpolated along the diagonal direction, so the kink at
    ``x = y`` always falls on a lattice diagonal and costs no accuracy.
    """
    N = int(round((L - a0) / h)) - 1
    hh = (L - a0) / (N + 1)
    grid = a0 + hh * np.arange(N + 2)          # includes both boundary points
    diag = np.full(N + 2, 2.0 / hh**2) - (lam + 1j * eps)
    if ell:
        diag[1:] = diag[1:] + ell * (ell + 1) / grid[1:] ** 2
    o2 = 1.0 / hh**4
    j = np.clip(np.floor((nodes - a0) / hh).astype(int), 0, N)
    f = (nodes - grid[j]) / hh
    cols = np.unique(np.concatenate([j, j + 1]))
    rows = np.unique(np.clip(np.concatenate([j - 1, j, j + 1, j + 2]), 0, N + 1))
    lo = max(1, int(rows.min()) - 2)
    hi = min(N, int(rows.max()) + 2)
    wdiag = diag[lo:hi + 1].copy()
    left = _chain_schur(diag[1:lo], o2)
    right = _chain_schur(diag[hi + 1:N + 1][::-1], o2)
    if left is not None:
        wdiag[0] -= o2 / left
    if right is not None:
        wdiag[-1] -= o2 / right
    m = wdiag.size
    ab = np.zeros((3, m), dtype=complex)
    ab[0, 1:] = -1.0 / hh**2
    ab[1] = wdiag
    ab[2, :-1] = -1.0 / hh**2
    # boundary rows/columns (index 0 or N+1) are identically zero
    icol = cols[(cols >= 1) & (cols <= N)]
    rint = (rows >= 1) & (rows <= N)
    rhs = np.zeros((m, icol.size), dtype=complex)
    rhs[icol - lo, np.arange(icol.size)] = 1.0
    sol = sla.solve_banded((1, 1), ab, rhs, check_finite=False)
    Rs = np.zeros((rows.size, cols.size), dtype=complex)
    Rs[np.ix_(np.flatnonzero(rint), np.searchsorted(cols, icol))] = sol[rows[rint] - lo] / hh
    rpos = np.full(N + 2, -1)
    rpos[rows] = np.arange(rows.size)
    cpos = np.full(N + 2, -1)
    cpos[cols] = np.arange(cols.size)

    def row_interp(xq, cidx):
        a = np.clip(np.floor((xq - a0) / hh + 1e-12).astype(int), 0, N)
        fa = (xq - grid[a]) / hh
        return (1 - fa) * Rs[rpos[a], cpos[cidx]] + fa * Rs[rpos[a + 1], cpos[cidx]]

    X = np.broadcast_to(nodes[:, None], (nodes.size, nodes.size))
    fy = np.broadcast_to(f[None, :], X.shape)
    jb = np.broadcast_to(j[None, :], X.shape)
    return (1 - fy) * row_interp(X - fy * hh, jb) + fy * row_interp(X + (1 - fy) * hh, jb + 1)


def default_eps_seq(lam: float, count: int = 3):
    e0 = 0.05 * min(1.0, lam)
    return tuple(e0 * 2.0 ** (-m) for m in range(count))


def t0_eps_oracle(lam: float, V: PotentialSpec, nquad: int | None = None, eps_seq=None,
                  h: float | None = None, box_c: float = 8.0, ell: int | None = None,
                  target: float = 1e-4, probe: bool = True) -> np.ndarray:
    """Estimate ``T0(lam + i0)`` on the Nyström nodes from ``T0(lam + i eps)``.

    A lattice resolvent at ``lam + i eps`` is computed on a box of half-width
    ``R + box_c / Im sqrt(lam + i eps)`` (so waves reflected at the wall are
    damped by ``exp(-2 box_c)``), interpolated to the same nodes and weights
    as :func:`a0_b0_1d` / :func:`a0_b0_radial_d3` (plain form), and the three
    values are Richardson-extrapolated to ``eps = 0``.

    Parameters
    ----------
    eps_seq : sequence of float, optional
        Halving sequence; default ``0.05 min(1, lam) * (1, 1/2, 1/4)``.
    h : float, optional
        Lattice spacing; default ``0.01 / max(1, k)``.
    ell : int, optional
        For radial potentials, the partial wave (default 0).
    probe : bool
        Recompute the smallest ``eps`` on a doubled box and raise
        :class:`BoxTooSmall` if the result moves by more than ``10 * target``.

    Returns
    -------
    ndarray
        Complex symmetric matrix ``W^(1/2) G K G W^(1/2)``.
    """
    if not lam > 0:
        raise ValueError("lam must be positive")
    if nquad is None:
        nquad = auto_nquad(V, lam)
    _check_nquad(nquad)
    R = V.support_radius
    radial = V.radial
    if radial and ell is None:
        ell = 0
    rule = panel_rule(0.0 if radial else -R, R, nquad, V.breakpoints)
    x, w = rule.nodes, rule.weights
    gw = np.sqrt(np.abs(V(x)) * w)
    if not np.any(gw):
        return np.zeros((x.size, x.size), dtype=complex)
    k = np.sqrt(lam)
    eps_seq = tuple(eps_seq) if eps_seq is not None else default_eps_seq(lam)
    h = h if h is not None else 0.01 / max(1.0, k)

    def one(eps, scale=1.0):
        L = scale * (R + box_c / np.sqrt(lam + 1j * eps).imag)
        a0 = 0.0 if radial else -L
        K = _lattice_kernel(x, lam, eps, a0, L, h, ell=ell if radial else None)
        return gw[:, None] * K * gw[None, :]

    vals = [one(e) for e in eps_seq]
    if probe:
        big = one(eps_seq[-1], scale=2.0)
        moved = np.linalg.norm(big - vals[-1], 2)
        if moved > 10 * target:
            raise BoxTooSmall(f"doubling the box moved T0 by {moved:.2e}")
    out = vals[0] if len(vals) == 1 else richardson(vals, ratio=eps_seq[0] / eps_seq[1], order=1)
    return 0.5 * (out + out.T)


# ----------------------------------------------------------------------------

def assemble_bsmat(J, op: BSOperator, theta: float | None = None) -> DenseSelfAdjoint:
    """``J^{-1} + A0`` or ``J^{-1} + A0 + cot(theta/2) B0``."""
    if J is None:
        J = op.sign
    J = np.asarray(J, dtype=float)
    jd = np.diag(J) if J.ndim == 2 else J
    if jd.shape != (op.n,) or not np.all(np.abs(jd) == 1):
        raise ValueError("J must be a diagonal of +-1 matching the operator size")
    m = np.diag(1.0 / jd) + op.a0
    label = "J+A0"
    if theta is not None:
        if not 0 < theta < 2 * np.pi:
            raise ThetaDegenerate(f"theta={theta} outside (0, 2 pi)")
        s = np.sin(theta / 2)
        c = np.cos(theta / 2)
        if abs(c) > COT_MAX * abs(s):
            raise ThetaDegenerate(f"cot(theta/2) exceeds {COT_MAX:g} at theta={theta}")
        cot = c / s
        m = m + cot * op.b0
        label = f"J+A0+cot({theta:.6g}/2)B0"
    return DenseSelfAdjoint(m, None, label)


def min_singval(M: DenseSelfAdjoint) -> float:
    ev = M.eigenvalues
    return float(np.min(np.abs(ev))) if ev.size else np.inf


def default_tol_sing(op: BSOperator) -> float:
    return 1e-6 * (1.0 + op.a0_norm())


@dataclass(frozen=True)
class SingularSet:
    lambdas: np.ndarray
    min_singvals: np.ndarray
    flags: np.ndarray
    tol_sing: np.ndarray

    def __post_init__(self):
        if self.lambdas.size > 1 and np.any(np.diff(self.lambdas) <= 0):
            raise ValueError("lambdas must be strictly increasing")


def scan_singular_set(V: PotentialSpec, J, lam_grid, nquad: int | None = None,
                      tol_sing: float | None = None, theta: float | None = None) -> SingularSet:
    """Smallest singular value of ``J^{-1} + A0(lam)`` along a grid."""
    lams = np.asarray(lam_grid, dtype=float)
    if np.any(lams <= 0) or np.any(np.diff(lams) <= 0):
        raise ValueError("lam_grid must be positive and strictly increasing")
    sv, tols = [], []
    for lam in lams:
        op = a0_b0_1d(lam, V, nquad)
        sv.append(min_singval(assemble_bsmat(J, op, theta)))
        tols.append(tol_sing if tol_sing is not None else default_tol_sing(op))
    sv, tols = np.array(sv), np.array(tols)
    return SingularSet(lambdas=lams, min_singvals=sv, flags=sv < tols, tol_sing=tols)


# ----------------------------------------------------------------------------
# Hilbert-Schmidt bound in three dimensions

def _unit_rule(n: int):
    t, w = leggauss(n)
    return 0.5 * (t + 1), 0.5 * w


def hs_bound_d3(V: PotentialSpec, nquad: int = 128, ninner: int = 64) -> float:
    """``(1/16 pi^2) int int |V(x)| |V(y)| / |x - y|^2 dx dy`` for radial ``V``.

    The angular integrals are done in closed form, leaving
    ``int_0^R dr r^3 |V(r)| int_0^1 du u |V(ru)| ln((1+u)/(1-u))``.  The
    inner integral is split at the breakpoints of ``V`` and the last piece is
    graded towards ``u = 1`` to absorb the logarithm.
    """
    if not V.radial:
        raise ValueError("a radial potential is required")
    if V.rho <= 2:
        raise DivergentBound(f"decay exponent {V.rho} <= 2: the double integral diverges")
    if V.is_zero:
        return 0.0
    R = V.support_radius
    outer = panel_rule(0.0, R, nquad, V.breakpoints)
    tq, wq = _unit_rule(ninner)
    m = 6
    total = 0.0
    for r, wr in zip(outer.nodes, outer.weights):
        vr = abs(float(V(r)))
        if vr == 0:
            continue
        cuts = sorted({b / r for b in V.breakpoints if 0 < b < r})
        edges = [0.0, *cuts, 1.0]
        inner = 0.0
        for lo, hi in zip(edges[:-2], edges[1:-1]):
            u = lo + (hi - lo) * tq
            inner += np.sum((hi - lo) * wq * u * np.abs(V(r * u)) * np.log((1 + u) / (1 - u)))
        u0 = edges[-2]
        # u = 1 - (1-u0) t^m on the last piece
        tm = tq**m
        u = 1 - (1 - u0) * tm
        jac = (1 - u0) * m * tq ** (m - 1)
        logs = np.log1p(u) - np.log(1 - u0) - m * np.log(tq)
        inner += np.sum(wq * jac * u * np.abs(V(r * u)) * logs)
        total += wr * r**3 * vr * inner
    return float(total)


def hs_bound_monte_carlo(V: PotentialSpec, nsamples: int = 10**7, seed: int = 0,
                         chunk: int = 10**6):
    """Monte-Carlo estimate of the same six-dimensional integral.

    ``x`` is uniform in the ball of radius ``R``; ``d = y - x`` has uniform
    length in ``[0, 2R]`` and uniform direction, which cancels the
    ``1/|d|^2`` singularity exactly.  Returns ``(estimate, standard_error)``.
    """
    R = V.support_radius
    D = 2 * R
    rng = np.random.default_rng(seed)
    vol = 4.0 / 3.0 * np.pi * R**3
    s1 = s2 = 0.0
    done = 0
    while done < nsamples:
        m = min(chunk, nsamples - done)
        rx = R * rng.random(m) ** (1 / 3)
        dx = rng.normal(size=(m, 3))
        x = dx / np.linalg.norm(dx, axis=1, keepdims=True) * rx[:, None]
        dd = rng.normal(size=(m, 3))
        d = dd / np.linalg.norm(dd, axis=1, keepdims=True) * (D * rng.random(m))[:, None]
        f = np.abs(V(np.linalg.norm(x, axis=1))) * np.abs(V(np.linalg.norm(x + d, axis=1)))
        s1 += f.sum()
        s2 += (f * f).sum()
        done += m
    mean = s1 / nsamples
    var = max(s2 / nsamples - mean**2, 0.0)
    scale = vol * 4 * np.pi * D / (16 * np.pi**2)
    return float(scale * mean), float(scale * np.sqrt(var / nsamples))


# ----------------------------------------------------------------------------

def a0_norm_bound(V: PotentialSpec, lam: float) -> float:
    """Hilbert-Schmidt upper bound ``||V||_1 / (2k)`` for ``||A0(lam)||`` on the line."""
    return V.l1_norm() / (2 * np.sqrt(lam))


@dataclass(frozen=True)
class HighEnergyThreshold:
    lam_star: float
    lam_cert: float
    ladder: tuple
    norms: tuple


def high_energy_threshold(V: PotentialSpec, lam_start: float = 0.25, nquad: int | None = None,
                          radial_ell: int | None = None) -> HighEnergyThreshold:
    """Energy above which ``||A0(lam)|| < 1``.

    ``lam_cert = (||V||_1 / 2)^2`` is certified by the Hilbert-Schmidt bound.
    ``lam_star`` is the smallest point of the doubling ladder
    ``lam_start * 2^m`` from which every ladder point up to ``lam_cert`` has
    ``||A0|| < 1``.
    """
    lam_cert = max((V.l1_norm() / 2) ** 2, lam_start)
    ladder, norms = [], []
    lam = lam_start
    while True:
        ladder.append(lam)
        if radial_ell is None:
            op = a0_b0_1d(lam, V, nquad)
        else:
            op = a0_b0_radial_d3(lam, V, radial_ell, nquad)
        norms.append(op.a0_norm())
        if lam >= lam_cert:
            break
        lam *= 2
    lam_star = lam_cert
    for lam_i, nrm in zip(reversed(ladder), reversed(norms)):
        if nrm >= 1:
            break
        lam_star = lam_i
    return HighEnergyThreshold(lam_star=float(lam_star), lam_cert=float(lam_cert),
                               ladder=tuple(ladder), norms=tuple(norms))
