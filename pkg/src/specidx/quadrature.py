"""Composite Gauss-Legendre rules and Nyström assembly for kinked kernels.

Kernels of the form ``f(|x - y|)`` with ``f`` smooth but ``f'(0) != 0`` have a
kink on the diagonal.  Plain Nyström on such a kernel only converges
algebraically.  :func:`nystrom_matrix` restores spectral convergence by
replacing, for each node, the row block of its own panel with a product
integration rule: the panel is split at the node, both halves get a fresh
Gauss rule, and the density is represented by the Lagrange interpolant on the
panel nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

PANEL_SIZE = 16


@dataclass(frozen=True)
class PanelRule:
    nodes: np.ndarray
    weights: np.ndarray
    edges: np.ndarray        # panel endpoints, len = npanels + 1
    panel_size: int

    @property
    def npanels(self) -> int:
        return len(self.edges) - 1


@lru_cache(maxsize=None)
def _gauss(p: int):
    t, w = leggauss(p)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def panel_rule(a: float, b: float, n: int, breakpoints=(), panel_size: int = PANEL_SIZE) -> PanelRule:
    """Composite Gauss-Legendre rule with about ``n`` nodes on ``[a, b]``.

    Panels never straddle a breakpoint.  The node count is rounded up to a
    multiple of ``panel_size``; panels are distributed over the pieces between
    breakpoints in proportion to their length (at least one each).
    """
    if not b > a:
        raise ValueError("need b > a")
    cuts = sorted({float(c) for c in breakpoints if a < c < b})
    pieces = np.array([a, *cuts, b])
    lengths = np.diff(pieces)
    npan = max(int(np.ceil(n / panel_size)), len(lengths))
    alloc = np.maximum(1, np.floor(npan * lengths / lengths.sum()).astype(int))
    # hand out the remainder to the pieces with the coarsest panels
    while alloc.sum() < npan:
        alloc[np.argmax(lengths / alloc)] += 1
    edges = np.concatenate([np.linspace(lo, hi, m + 1)[:-1] for lo, hi, m in
                            zip(pieces[:-1], pieces[1:], alloc)] + [[b]])
    t, w = _gauss(panel_size)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return PanelRule(nodes=nodes, weights=weights, edges=edges, panel_size=panel_size)


@lru_cache(maxsize=None)
def _barycentric_weights(p: int):
    t, _ = _gauss(p)
    diff = t[:, None] - t[None, :]
    np.fill_diagonal(diff, 1.0)
    bw = 1.0 / diff.prod(axis=1)
    bw.setflags(write=False)
    return bw


def lagrange_matrix(t: np.ndarray, bw: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``L[q, j] = ell_j(y_q)`` for the Lagrange basis on nodes ``t``."""
    d = y[:, None] - t[None, :]
    exact = np.abs(d) < 1e-15
    d[exact] = 1.0
    tmp = bw[None, :] / d
    L = tmp / tmp.sum(axis=1, keepdims=True)
    hit = exact.any(axis=1)
    L[hit] = exact[hit].astype(float)
    return L


@lru_cache(maxsize=None)
def _split_rules(p: int):
    """Reference split rules for every node of a reference panel.

    Returns ``(ys, ws, L)`` with ``ys[i]`` the 2p sub-rule nodes on
    ``[-1, t_i] U [t_i, 1]``, ``ws[i]`` their weights and ``L[i]`` the
    (2p, p) interpolation matrix onto the panel nodes.
    """
    t, w = _gauss(p)
    bw = _barycentric_weights(p)
    ys = np.empty((p, 2 * p))
    ws = np.empty((p, 2 * p))
    Ls = np.empty((p, 2 * p, p))
    for i, ti in enumerate(t):
        for s, (lo, hi) in enumerate(((-1.0, ti), (ti, 1.0))):
            ys[i, s * p:(s + 1) * p] = 0.5 * (hi - lo) * t + 0.5 * (hi + lo)
            ws[i, s * p:(s + 1) * p] = 0.5 * (hi - lo) * w
        Ls[i] = lagrange_matrix(t, bw, ys[i])
    return ys, ws, Ls


def nystrom_matrix(kernel, g, rule: PanelRule, kink: bool = True) -> np.ndarray:
    """Symmetrised Nyström matrix of ``g(x) kernel(x, y) g(y)``.

    Parameters
    ----------
    kernel : callable
        Vectorised ``kernel(x, y)`` (broadcasting), real or complex.
    g : callable
        Vectorised weight function ``g(x)``; usually ``|V|^(1/2)``.
    rule : PanelRule
    kink : bool
        Apply the product-integration correction on diagonal panels.

    Returns
    -------
    ndarray
        ``S = (W^(1/2) M W^(-1/2) + transpose) / 2``, i.e. the matrix acting on
        ``W^(1/2)``-scaled nodal values, symmetrised.
    """
    x, w = rule.nodes, rule.weights
    gx = g(x)
    M = gx[:, None] * kernel(x[:, None], x[None, :]) * (gx * w)[None, :]
    if kink:
        p = rule.panel_size
        ys_ref, ws_ref, Ls = _split_rules(p)
        for ip in range(rule.npanels):
            a, b = rule.edges[ip], rule.edges[ip + 1]
            half, mid = 0.5 * (b - a), 0.5 * (a + b)
            sl = slice(ip * p, (ip + 1) * p)
            gi = gx[sl]
            if not np.any(gi):
                continue
            ys = mid + half * ys_ref                      # (p, 2p)
            vals = kernel(x[sl][:, None], ys) * g(ys) * (half * ws_ref)
            M[sl, sl] = gi[:, None] * np.einsum("iq,iqj->ij", vals, Ls)
    sw = np.sqrt(w)
    S = sw[:, None] * M / sw[None, :]
    return 0.5 * (S + S.T)


def richardson(values, ratio: float = 2.0, order: int = 1):
    """Richardson extrapolation of a sequence computed at ``h, h/r, h/r^2, ...``.

    The error is assumed to expand in powers ``h^order, h^(order+1), ...``;
    each elimination removes one power.  Works on arrays elementwise.
    """
    table = [np.asarray(v) for v in values]
    p = order
    while len(table) > 1:
        f = ratio ** p
        table = [(f * table[i + 1] - table[i]) / (f - 1) for i in range(len(table) - 1)]
        p += 1
    return table[0]
