"""The index on the positive energy axis from the limiting Birman-Schwinger matrix.

At ``lam > 0`` the index is read off the inertia of ``J^{-1} + A0(lam)``::

    xi(lam) = N(R_-; J^{-1} + A0(lam)) - N(R_-; J^{-1})

computed as the index of the pair of negative spectral projections.  It is
undefined where ``J^{-1} + A0(lam)`` is (numerically) singular.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bsop import BSOperator, a0_b0_1d, a0_b0_radial_d3, assemble_bsmat, min_singval
from .lattice import DenseSelfAdjoint, spectral_projection
from .parallel import pmap
from .potentials import PotentialSpec
from .projpair import index_pair


class _Undefined:
    """Marker for energies where the index does not exist numerically."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "UNDEFINED"

    def __reduce__(self):
        return (_Undefined, ())


UNDEFINED = _Undefined()


def is_defined(value) -> bool:
    return value is not UNDEFINED


@dataclass(frozen=True)
class XiPoint:
    lam: float
    xi: object                  # int or UNDEFINED
    min_singval: float
    tol_sing: float
    a0_norm: float
    lower: int                  # -N([1, inf); A0)
    upper: int                  # N((-inf, -1]; A0)
    rank_minus: int
    rank_plus: int


def index_of_bsmat(M: DenseSelfAdjoint, J) -> int:
    """``index(E(R_-; M), E(R_-; J))``, i.e. ``N(R_-; M) - N(R_-; J)``."""
    Jm = DenseSelfAdjoint(np.diag(np.asarray(J, float)), None, "J")
    P = spectral_projection(M, 0.0)
    Q = spectral_projection(Jm, 0.0)
    return index_pair(P, Q).value


def evaluate(op: BSOperator, J=None, tol: float | None = None, theta: float | None = None) -> XiPoint:
    """Index and bound data from one discretised operator."""
    J = op.sign if J is None else np.asarray(J, float)
    if J.ndim == 2:
        J = np.diag(J)
    M = assemble_bsmat(J, op, theta)
    sv = min_singval(M)
    ea = np.linalg.eigvalsh(op.a0) if op.n else np.zeros(0)
    a0n = float(np.abs(ea).max()) if ea.size else 0.0
    tol_sing = tol if tol is not None else 1e-6 * (1 + a0n)
    xi = UNDEFINED if sv < tol_sing else index_of_bsmat(M, J)
    # nodes where G vanishes belong to neither V_+ nor V_-
    live = op.g > 0 if op.g is not None else np.ones(op.n, bool)
    return XiPoint(lam=op.lam, xi=xi, min_singval=sv, tol_sing=tol_sing, a0_norm=a0n,
                   lower=-int(np.sum(ea >= 1)), upper=int(np.sum(ea <= -1)),
                   rank_minus=int(np.sum((J < 0) & live)),
                   rank_plus=int(np.sum((J > 0) & live)))


def xi_essential(lam: float, V: PotentialSpec, J=None, nquad: int | None = None,
                 tol: float | None = None):
    """Index at ``lam > 0``; ``UNDEFINED`` if ``J^{-1} + A0(lam)`` is singular.

    ``J`` defaults to ``sign V`` on the quadrature nodes and ``tol`` to
    ``1e-6 (1 + ||A0||)``.
    """
    return evaluate(a0_b0_1d(lam, V, nquad), J, tol).xi


@dataclass(frozen=True)
class Jump:
    lo: float
    hi: float
    before: int
    after: int
    min_singval: float

    @property
    def size(self) -> int:
        return self.after - self.before


@dataclass(frozen=True)
class XiCurve:
    lambdas: np.ndarray
    xi: list
    fredholm_flags: np.ndarray
    min_singvals: np.ndarray
    jumps: list
    points: list = field(repr=False, default_factory=list)

    def defined_values(self):
        return [(lam, x) for lam, x in zip(self.lambdas, self.xi) if is_defined(x)]


def _bisect_jump(f, lo, xlo, hi, xhi, width, out, depth=0):
    """Shrink ``[lo, hi]`` around every change of the index value."""
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        pt = f(mid)
        tries = 0
        while not is_defined(pt.xi) and tries < 3:
            tries += 1
            mid = lo + (hi - lo) * (0.5 + 0.1 * tries)
            pt = f(mid)
        if not is_defined(pt.xi):
            break
        if pt.xi == xlo:
            lo = mid
        elif pt.xi == xhi:
            hi = mid
        else:
            _bisect_jump(f, lo, xlo, mid, pt.xi, width, out, depth + 1)
            _bisect_jump(f, mid, pt.xi, hi, xhi, width, out, depth + 1)
            return
    out.append(Jump(lo=float(lo), hi=float(hi), before=xlo, after=xhi,
                    min_singval=f(0.5 * (lo + hi)).min_singval))


def xi_curve(V: PotentialSpec, J=None, lam_grid=None, nquad: int | None = None,
             width: float = 1e-4, tol: float | None = None, workers: int | None = None,
             theta: float | None = None) -> XiCurve:
    """Index along an energy grid with jump brackets refined to ``width``.

    Undefined points stay in the output; jumps are recorded between
    consecutive defined points whose values differ.
    """
    lams = np.asarray(lam_grid, dtype=float)
    if lams.ndim != 1 or np.any(lams <= 0) or np.any(np.diff(lams) <= 0):
        raise ValueError("lam_grid must be positive and strictly increasing")

    def f(lam):
        return evaluate(a0_b0_1d(lam, V, nquad), J, tol, theta)

    pts = pmap(f, lams, workers)
    jumps: list = []
    defined = [i for i, p in enumerate(pts) if is_defined(p.xi)]
    for a, b in zip(defined[:-1], defined[1:]):
        if pts[a].xi != pts[b].xi:
            _bisect_jump(f, lams[a], pts[a].xi, lams[b], pts[b].xi, width, jumps)
    jumps.sort(key=lambda j: j.lo)
    return XiCurve(lambdas=lams, xi=[p.xi for p in pts],
                   fredholm_flags=np.array([is_defined(p.xi) for p in pts]),
                   min_singvals=np.array([p.min_singval for p in pts]), jumps=jumps, points=pts)


@dataclass(frozen=True)
class BoundViolation:
    lam: float
    xi: int
    kind: str
    lower: int
    upper: int


def bound_report(curve: XiCurve, V: PotentialSpec | None = None, ops=None) -> list:
    """Check every defined point against the operator and rank bounds.

    The operator bounds are ``-N([1, inf); A0) <= xi <= N((-inf, -1]; A0)``;
    the rank bounds are ``-rank V_- <= xi <= rank V_+`` with ranks counted on
    the quadrature nodes.  ``ops`` may supply recomputed operators (one per
    grid point); otherwise the data stored on the curve is used.  Returns the
    list of violations.
    """
    pts = curve.points
    if ops is not None:
        pts = [evaluate(op) for op in ops]
    out = []
    for p in pts:
        if not is_defined(p.xi):
            continue
        if not p.lower <= p.xi <= p.upper:
            out.append(BoundViolation(p.lam, p.xi, "operator", p.lower, p.upper))
        if not -p.rank_minus <= p.xi <= p.rank_plus:
            out.append(BoundViolation(p.lam, p.xi, "rank", -p.rank_minus, p.rank_plus))
    return out


@dataclass(frozen=True)
class ChannelXi:
    lam: float
    value: object
    per_channel: tuple
    tail_norm: float


def channel_truncated_xi(lam: float, V: PotentialSpec, ell_max: int = 8,
                         nquad: int | None = None) -> ChannelXi:
    """``sum_l (2l + 1) xi_l(lam)`` over partial waves ``l <= ell_max``.

    ``tail_norm`` is ``||A0^(ell_max)||``; once it is below 1 the channel
    contributes nothing and higher channels are expected to follow.
    """
    per = []
    tail = 0.0
    for ell in range(ell_max + 1):
        op = a0_b0_radial_d3(lam, V, ell, nquad)
        pt = evaluate(op)
        per.append(pt.xi)
        tail = pt.a0_norm
    if any(not is_defined(x) for x in per):
        value = UNDEFINED
    else:
        value = int(sum((2 * ell + 1) * x for ell, x in enumerate(per)))
    return ChannelXi(lam=float(lam), value=value, per_channel=tuple(per), tail_norm=tail)
