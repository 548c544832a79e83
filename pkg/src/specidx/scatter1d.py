"""One-dimensional scattering matrix, eigenphases and their spectral flow.

The fundamental system of ``-u'' + V u = k^2 u`` is carried across
``[-R, R]``; the transfer matrix in plane-wave coefficients gives
``t = 1/T22``, ``r_left = -T21/T22``, ``r_right = T12/T22``.  In the basis
of momentum directions ordered ``(-1, +1)``::

    S(lam) = [[t,       r_left],
              [r_right, t     ]]

Moderate energies use an adaptive Runge-Kutta integration vectorised over
energies; at high energies (where RK steps scale with ``k``) a
piecewise-constant slab propagator with exact 2x2 slab matrices takes over.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import linear_sum_assignment

from .bsop import a0_b0_1d, assemble_bsmat, min_singval
from .errors import OdeFailure, UnderResolved, UnitarityViolation
from .potentials import PotentialSpec

TWO_PI = 2 * np.pi
UNITARITY_FAIL = 1e-6
RK_PHASE_LIMIT = 400.0        # k * 2R above which the slab propagator is used
RK_BATCH = 64


@dataclass(frozen=True, eq=False)
class SMatrix:
    lam: float
    entries: np.ndarray
    unitarity_residual: float

    @property
    def t(self) -> complex:
        return complex(self.entries[0, 0])

    @property
    def r_left(self) -> complex:
        return complex(self.entries[0, 1])

    @property
    def r_right(self) -> complex:
        return complex(self.entries[1, 0])


def _segments(V: PotentialSpec):
    R = V.support_radius
    cuts = sorted({float(b) for b in V.breakpoints if -R < b < R})
    return [-R, *cuts, R]


def _rk_fundamental(ks: np.ndarray, V: PotentialSpec, tol: float) -> np.ndarray:
    """Fundamental matrices ``Phi(R, -R)`` for all ``ks`` in one ODE system."""
    m = ks.size
    k2 = ks**2
    y = np.tile([1.0, 0.0, 0.0, 1.0], m)

    def rhs(x, yv):
        yv = yv.reshape(m, 4)
        q = float(V(x)) - k2
        return np.stack([yv[:, 1], q * yv[:, 0], yv[:, 3], q * yv[:, 2]], axis=1).ravel()

    edges = _segments(V)
    for lo, hi in zip(edges[:-1], edges[1:]):
        sol = solve_ivp(rhs, (lo, hi), y, method="DOP853", rtol=tol, atol=tol * 1e-2)
        if not sol.success:
            raise OdeFailure(f"integration failed on [{lo:g}, {hi:g}]: {sol.message}")
        y = sol.y[:, -1]
    y = y.reshape(m, 4)
    # Phi = [[u1, u2], [u1', u2']]
    return np.stack([np.stack([y[:, 0], y[:, 2]], -1), np.stack([y[:, 1], y[:, 3]], -1)], 1)


def _slab_edges(V: PotentialSpec, nslab: int) -> np.ndarray:
    edges = np.array(_segments(V))
    lengths = np.diff(edges)
    counts = np.maximum(1, np.round(nslab * lengths / lengths.sum()).astype(int))
    return np.concatenate([np.linspace(a, b, c + 1)[:-1] for a, b, c in
                           zip(edges[:-1], edges[1:], counts)] + [[edges[-1]]])


def _propagator_fundamental(ks: np.ndarray, V: PotentialSpec, nslab: int = 2**14) -> np.ndarray:
    """Same as :func:`_rk_fundamental` with ``V`` frozen at slab midpoints."""
    e = _slab_edges(V, nslab)
    h = np.diff(e)
    vm = V(0.5 * (e[:-1] + e[1:]))
    out = np.empty((ks.size, 2, 2))
    for i, k in enumerate(ks):
        kap = np.sqrt((k * k - vm).astype(complex))
        c, s = np.cos(kap * h), np.sin(kap * h)
        with np.errstate(invalid="ignore", divide="ignore"):
            sk = np.where(kap == 0, h, s / np.where(kap == 0, 1, kap))
        T = np.empty((h.size, 2, 2), dtype=complex)
        T[:, 0, 0] = c
        T[:, 0, 1] = sk
        T[:, 1, 0] = -kap * s
        T[:, 1, 1] = c
        while T.shape[0] > 1:
            if T.shape[0] % 2:
                T = np.concatenate([T, np.eye(2)[None]], 0)
            T = T[1::2] @ T[0::2]
        out[i] = T[0].real
    return out


def _from_fundamental(ks, Phi, R):
    """Scattering matrices from fundamental matrices over ``[-R, R]``."""
    ek = np.exp(1j * ks * R)
    ekm = 1.0 / ek
    # M(x) maps plane-wave coefficients (A, B) to (u, u')
    M_left = np.empty((ks.size, 2, 2), dtype=complex)
    M_left[:, 0, 0], M_left[:, 0, 1] = ekm, ek
    M_left[:, 1, 0], M_left[:, 1, 1] = 1j * ks * ekm, -1j * ks * ek
    M_right = np.empty_like(M_left)
    M_right[:, 0, 0], M_right[:, 0, 1] = ek, ekm
    M_right[:, 1, 0], M_right[:, 1, 1] = 1j * ks * ek, -1j * ks * ekm
    T = np.linalg.solve(M_right, Phi @ M_left)
    t = 1.0 / T[:, 1, 1]
    r_left = -T[:, 1, 0] / T[:, 1, 1]
    r_right = T[:, 0, 1] / T[:, 1, 1]
    S = np.empty((ks.size, 2, 2), dtype=complex)
    S[:, 0, 0] = t
    S[:, 0, 1] = r_left
    S[:, 1, 0] = r_right
    S[:, 1, 1] = t
    return S


def smatrices(lams, V: PotentialSpec, ode_tol: float = 1e-10, method: str = "auto",
              nslab: int = 2**14) -> list:
    """Scattering matrices at many energies.

    ``method`` is ``"rk"``, ``"propagator"`` or ``"auto"`` (RK while
    ``2 k R <= 400``).  Energies are processed in batches of similar ``k``
    so the shared RK step size is not set by the largest one.
    """
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    if np.any(lams <= 0):
        raise ValueError("energies must be positive")
    ks = np.sqrt(lams)
    R = V.support_radius
    S = np.empty((lams.size, 2, 2), dtype=complex)
    if V.is_zero:
        S[:] = np.eye(2)
    else:
        order = np.argsort(ks)
        if method == "auto":
            use_rk = ks[order] * 2 * R <= RK_PHASE_LIMIT
        elif method in ("rk", "propagator"):
            use_rk = np.full(ks.size, method == "rk")
        else:
            raise ValueError(f"unknown method {method!r}")
        rk_idx, pr_idx = order[use_rk], order[~use_rk]
        for start in range(0, rk_idx.size, RK_BATCH):
            b = rk_idx[start:start + RK_BATCH]
            S[b] = _from_fundamental(ks[b], _rk_fundamental(ks[b], V, ode_tol), R)
        if pr_idx.size:
            S[pr_idx] = _from_fundamental(ks[pr_idx], _propagator_fundamental(ks[pr_idx], V, nslab), R)
    out = []
    eye = np.eye(2)
    for lam, s in zip(lams, S):
        res = float(np.linalg.norm(s.conj().T @ s - eye, 2))
        if res > UNITARITY_FAIL:
            raise UnitarityViolation(f"||S*S - I|| = {res:.2e} at lam={lam:g}")
        out.append(SMatrix(lam=float(lam), entries=s, unitarity_residual=res))
    return out


def smatrix(lam: float, V: PotentialSpec, ode_tol: float = 1e-10, method: str = "auto") -> SMatrix:
    """Scattering matrix at a single energy ``lam > 0``."""
    return smatrices([lam], V, ode_tol, method)[0]


def eigen(S: SMatrix):
    """Eigenphases in ``[0, 2 pi)`` (ascending) and matching eigenvectors."""
    w, v = np.linalg.eig(S.entries)
    ph = np.mod(np.angle(w), TWO_PI)
    ph[ph >= TWO_PI] = 0.0
    order = np.argsort(ph)
    return ph[order], v[:, order]


def eigenphases(S: SMatrix) -> np.ndarray:
    """Sorted eigenphases in ``[0, 2 pi)``; a phase of 0 means eigenvalue 1."""
    if S.unitarity_residual > UNITARITY_FAIL:
        raise UnitarityViolation(f"||S*S - I|| = {S.unitarity_residual:.2e}")
    return eigen(S)[0]


def parity_phases(lam: float, V: PotentialSpec, ode_tol: float = 1e-12):
    """``(2 delta_even, 2 delta_odd) mod 2 pi`` from half-line integrations.

    Only meaningful for even ``V``.  The even solution starts with
    ``u(0) = 1, u'(0) = 0`` and the odd one with ``u(0) = 0, u'(0) = 1``;
    outside the support they are ``cos(kx + delta_e)`` and
    ``sin(kx + delta_o)`` up to normalisation.
    """
    k = np.sqrt(lam)
    R = V.support_radius
    cuts = sorted({float(b) for b in V.breakpoints if 0 < b < R})
    edges = [0.0, *cuts, R]

    def rhs(x, y):
        q = float(V(x)) - k * k
        return [y[1], q * y[0], y[3], q * y[2]]

    y = np.array([1.0, 0.0, 0.0, 1.0])
    for lo, hi in zip(edges[:-1], edges[1:]):
        sol = solve_ivp(rhs, (lo, hi), y, method="DOP853", rtol=ode_tol, atol=ode_tol * 1e-2)
        if not sol.success:
            raise OdeFailure(sol.message)
        y = sol.y[:, -1]
    d_even = np.arctan2(-y[1], k * y[0]) - k * R
    d_odd = np.arctan2(k * y[2], y[3]) - k * R
    return float(np.mod(2 * d_even, TWO_PI)), float(np.mod(2 * d_odd, TWO_PI))


# ----------------------------------------------------------------------------
# eigenphase tracking

def _circ(a, b):
    d = np.mod(a - b + np.pi, TWO_PI) - np.pi
    return np.abs(d)


def _match(prev_ph, prev_vec, ph, vec):
    """Permutation ``p`` so that ``ph[p[i]]`` continues branch ``i``."""
    dist = _circ(prev_ph[:, None], ph[None, :])
    overlap = np.abs(prev_vec.conj().T @ vec)
    cost = dist + 1e-6 * (1 - overlap**2)
    _, p = linear_sum_assignment(cost)
    return p


@dataclass
class FlowTrace:
    """Matched eigenphase branches of ``S(lam)`` on an increasing grid.

    ``unwrapped[i, b]`` is branch ``b`` at ``lambdas[i]`` made continuous
    across the grid.  When ``at_infinity`` is set, the last row is
    ``S(inf) = I`` and ``lambdas[-1]`` is ``inf``.
    """

    lambdas: np.ndarray
    phases: np.ndarray            # sorted phases per energy, in [0, 2 pi)
    unwrapped: np.ndarray
    branch_map: list              # permutation per step
    at_infinity: bool
    max_motion: float
    smatrices: list = field(repr=False, default_factory=list)

    def crossings(self, theta: float, lo: int = 0, hi: int | None = None):
        """Signed crossings of ``theta`` as ``((lam_a, lam_b), theta, sign)``."""
        steps = _step_crossings(self.unwrapped, theta)
        hi = len(self.lambdas) - 1 if hi is None else hi
        out = []
        for i in range(lo, hi):
            for sgn in steps[i]:
                out.append(((float(self.lambdas[i]), float(self.lambdas[i + 1])), theta, sgn))
        return out

    def step_flow(self, theta: float) -> np.ndarray:
        return np.array([sum(s) for s in _step_crossings(self.unwrapped, theta)], dtype=int)

    def suffix_flow(self, theta: float) -> np.ndarray:
        """Flow from ``lambdas[i]`` to the end of the trace, for every ``i``."""
        steps = self.step_flow(theta)
        return np.concatenate([np.cumsum(steps[::-1])[::-1], [0]])

    def endpoint_distance(self, theta: float, i: int) -> float:
        return float(np.min(_circ(self.unwrapped[i], theta)))

    def index_of(self, lam: float) -> int:
        i = int(np.searchsorted(self.lambdas, lam))
        if i >= len(self.lambdas) or not np.isclose(self.lambdas[i], lam, rtol=1e-14, atol=0):
            raise KeyError(f"lambda={lam} is not a grid point of the trace")
        return i


def _step_crossings(unwrapped: np.ndarray, theta: float):
    """Per step, the list of crossing signs of ``theta`` (half-open rule)."""
    a, b = unwrapped[:-1], unwrapped[1:]
    out = []
    for ra, rb in zip(a, b):
        signs = []
        for pa, pb in zip(ra, rb):
            if pb > pa:   # anticlockwise: pa < theta + 2 pi m <= pb
                n = int(np.floor((pb - theta) / TWO_PI) - np.floor((pa - theta) / TWO_PI))
                signs.extend([1] * n)
            elif pa > pb:  # clockwise: pb < theta + 2 pi m <= pa
                n = int(np.floor((pa - theta) / TWO_PI) - np.floor((pb - theta) / TWO_PI))
                signs.extend([-1] * n)
        out.append(signs)
    return out


def high_energy_cutoff(V: PotentialSpec, target: float = 1e-3, lam_start: float = 1.0,
                       ode_tol: float = 1e-10) -> float:
    """Energy from which ``||S(lam) - I|| < target``, found by doubling."""
    if V.is_zero:
        return lam_start
    lam = lam_start
    while True:
        s = smatrix(lam, V, ode_tol)
        if np.linalg.norm(s.entries - np.eye(2), 2) < target:
            # confirm the next two ladder points as well
            nxt = smatrices([2 * lam, 4 * lam], V, ode_tol)
            if all(np.linalg.norm(x.entries - np.eye(2), 2) < target for x in nxt):
                return lam
        lam *= 2
        if lam > 1e14:
            raise UnderResolved("no energy with ||S - I|| below target up to 1e14")


def _initial_k_grid(V, k0, k1):
    R = V.support_radius
    dk = 1.0 / (4 * R)
    k_mid = min(k1, max(k0, 4 * np.sqrt(max(V.vmax, 1e-300)) + 2 * np.pi / R))
    ks = np.arange(k0, k_mid, dk)
    if k1 > k_mid:
        n_geo = int(np.ceil(np.log(k1 / k_mid) / np.log(1.02)))
        ks = np.concatenate([ks, np.geomspace(k_mid, k1, n_geo + 1)])
    else:
        ks = np.concatenate([ks, [k1]])
    return np.unique(ks)


def build_flow_trace(V: PotentialSpec, lam0: float, lam_max: float | None = None,
                     include=(), max_step: float = 0.2, guard: float = np.pi / 2,
                     max_points: int = 40000, ode_tol: float = 1e-10,
                     append_infinity: bool = True) -> FlowTrace:
    """Track the eigenphases of ``S(lam)`` from ``lam0`` up to ``lam_max``.

    The grid starts uniform in ``k`` with step ``1/(4R)`` and turns geometric
    at high energy; every step on which some branch moves more than
    ``max_step`` radians is bisected (in ``k``) until none does or
    ``max_points`` is reached.  If a step still moves by ``guard`` or more,
    :class:`UnderResolved` is raised.  ``lam_max`` defaults to the energy
    where ``||S - I|| < 1e-3`` (or the largest ``include`` point, if
    higher); ``S(inf) = I`` is appended.
    """
    if not lam0 > 0:
        raise ValueError("lam0 must be positive")
    if lam_max is None:
        lam_max = max(high_energy_cutoff(V, ode_tol=ode_tol), 2 * lam0, *include)
    if lam_max <= lam0:
        raise ValueError("lam_max must exceed lam0")
    k0, k1 = np.sqrt(lam0), np.sqrt(lam_max)
    ks = _initial_k_grid(V, k0, k1)
    extra = np.sqrt(np.asarray([l for l in include if lam0 <= l <= lam_max], float))
    ks = np.unique(np.concatenate([ks, extra, [k0, k1]]))

    cache: dict = {}

    def compute(kk):
        new = [k for k in kk if k not in cache]
        if new:
            for k, s in zip(new, smatrices(np.square(new), V, ode_tol)):
                ph, vec = eigen(s)
                cache[k] = (s, ph, vec)

    compute(ks)
    while True:
        unwrapped, perms, motion = _track([cache[k] for k in ks])
        bad = np.flatnonzero(motion > max_step)
        if bad.size == 0 or ks.size >= max_points:
            break
        mids = 0.5 * (ks[bad] + ks[bad + 1])
        mids = mids[(mids > ks[bad]) & (mids < ks[bad + 1])]
        if mids.size == 0:
            break
        mids = mids[: max(0, max_points - ks.size)]
        compute(mids)
        ks = np.unique(np.concatenate([ks, mids]))
    worst = float(motion.max()) if motion.size else 0.0
    if worst >= guard:
        raise UnderResolved(f"eigenphase moved {worst:.3f} rad in one step with {ks.size} points",
                            npoints=int(ks.size))
    lams = np.square(ks)
    lams[0], lams[-1] = lam0, lam_max
    for l in include:
        if lam0 <= l <= lam_max:
            lams[np.argmin(np.abs(lams - l))] = l
    phases = np.array([cache[k][1] for k in ks])
    smats = [cache[k][0] for k in ks]
    if append_infinity:
        last = unwrapped[-1]
        final = TWO_PI * np.round(last / TWO_PI)
        unwrapped = np.vstack([unwrapped, final])
        perms.append(np.arange(last.size))
        lams = np.append(lams, np.inf)
        phases = np.vstack([phases, np.zeros(last.size)])
    return FlowTrace(lambdas=lams, phases=phases, unwrapped=unwrapped, branch_map=perms,
                     at_infinity=append_infinity, max_motion=worst, smatrices=smats)


def _track(data):
    """Match branches along the grid; returns unwrapped phases, maps, motions."""
    s0, ph0, v0 = data[0]
    nb = ph0.size
    unwrapped = np.empty((len(data), nb))
    unwrapped[0] = ph0
    cur_ph, cur_vec = ph0, v0
    perms = []
    motion = np.empty(len(data) - 1)
    for i in range(1, len(data)):
        _, ph, vec = data[i]
        p = _match(cur_ph, cur_vec, ph, vec)
        nxt = ph[p]
        d = np.mod(nxt - cur_ph + np.pi, TWO_PI) - np.pi
        unwrapped[i] = unwrapped[i - 1] + d
        motion[i - 1] = np.abs(d).max()
        perms.append(p)
        cur_ph, cur_vec = nxt, vec[:, p]
    return unwrapped, perms, motion


def spectral_flow(trace: FlowTrace, theta: float, lam_from: float | None = None,
                  lam_to: float | None = None) -> int:
    """Anticlockwise minus clockwise crossings of ``e^{i theta}`` along the trace."""
    if not 0 < theta < TWO_PI:
        raise ValueError("theta must lie in (0, 2 pi)")
    if trace.max_motion >= np.pi / 2:
        raise UnderResolved("trace violates the resolution guard")
    lo = 0 if lam_from is None else trace.index_of(lam_from)
    hi = len(trace.lambdas) - 1 if lam_to is None else trace.index_of(lam_to)
    return int(trace.step_flow(theta)[lo:hi].sum())


def _count_arc(phases, t1, t2):
    """``N(e^{i t1}, e^{i t2}; U)``: eigenphases in ``[t1, t2)``, signed."""
    ph = np.mod(phases, TWO_PI)
    if t1 < t2:
        return int(np.sum((ph >= t1) & (ph < t2)))
    if t1 > t2:
        return -int(np.sum((ph >= t2) & (ph < t1)))
    return 0


def free_runs(trace: FlowTrace):
    """Maximal runs of steps admitting a common free point ``theta0``.

    Returns a list of ``(i_start, i_end, free_mask)`` where ``free_mask`` is a
    boolean array over a fine theta grid (``4096`` points) marking points not
    swept by any branch during the run.
    """
    grid = (np.arange(4096) + 0.5) * TWO_PI / 4096
    runs = []
    start = 0
    free = np.ones(grid.size, bool)
    for i in range(len(trace.lambdas) - 1):
        swept = np.zeros(grid.size, bool)
        for pa, pb in zip(trace.unwrapped[i], trace.unwrapped[i + 1]):
            lo, hi = min(pa, pb), max(pa, pb)
            # grid points theta with lo <= theta + 2 pi m <= hi for some m
            m = np.floor((hi - grid) / TWO_PI)
            swept |= grid + TWO_PI * m >= lo - 1e-12
        if not np.any(free & ~swept):
            runs.append((start, i, free))
            start, free = i, ~swept
        else:
            free &= ~swept
    runs.append((start, len(trace.lambdas) - 1, free))
    return runs, grid


def spectral_flow_d5a(trace: FlowTrace, theta: float, pick: int = 0) -> int:
    """Flow from the sub-run construction with arc counts at the run ends.

    ``pick`` selects which free point of each run serves as ``theta0`` (0:
    centre of the widest free arc, 1: a point of the free set far from it);
    the result must not depend on it.
    """
    runs, grid = free_runs(trace)
    total = 0
    for i0, i1, free in runs:
        idx = np.flatnonzero(free)
        if idx.size == 0:
            raise UnderResolved("no free theta0 on a single step")
        theta0 = _choose_theta0(grid, free, pick)
        total += (_count_arc(trace.unwrapped[i1], theta, theta0)
                  - _count_arc(trace.unwrapped[i0], theta, theta0))
    return total


def _choose_theta0(grid, free, pick):
    idx = np.flatnonzero(free)
    # split into contiguous (circular) arcs
    breaks = np.flatnonzero(np.diff(idx) > 1)
    arcs = np.split(idx, breaks + 1)
    if len(arcs) > 1 and free[0] and free[-1]:
        arcs[0] = np.concatenate([arcs[-1], arcs[0]])
        arcs.pop()
    widest = max(arcs, key=len)
    centre = grid[widest[len(widest) // 2]]
    if pick == 0:
        return centre
    far = idx[np.argmax(_circ(grid[idx], centre))]
    return grid[far]


def mu_at(theta: float, lam0: float, V: PotentialSpec, grid_policy: dict | None = None,
          trace: FlowTrace | None = None) -> int:
    """``mu(e^{i theta}; lam0)``: minus the flow of ``S`` over ``[lam0, inf]``."""
    if trace is None:
        trace = build_flow_trace(V, lam0, **(grid_policy or {}))
    return -spectral_flow(trace, theta, lam_from=lam0)


def refine_crossing(V: PotentialSpec, theta: float, lo: float, hi: float, width: float = 1e-4,
                    ode_tol: float = 1e-10):
    """Bisect a bracket on which one branch crosses ``theta``.

    The branch is followed through the bracket by matching; the bracket is
    narrowed to the half where the crossing happens.
    """
    def phases(lam):
        s = smatrix(lam, V, ode_tol)
        return eigen(s)

    pa, va = phases(lo)
    pb, vb = phases(hi)
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        pm, vm = phases(mid)
        # flow across [lo, mid] at theta
        p = _match(pa, va, pm, vm)
        d = np.mod(pm[p] - pa + np.pi, TWO_PI) - np.pi
        left = sum(sum(s) for s in _step_crossings(np.vstack([pa, pa + d]), theta))
        if left != 0:
            hi, pb, vb = mid, pm, vm
        else:
            lo, pa, va = mid, pm, vm
    return lo, hi


@dataclass(frozen=True)
class ThmReport:
    lambdas: np.ndarray
    xi: list
    mu: list
    phase_dist: np.ndarray
    violations: list
    excluded: list


def verify_thm_d1(V: PotentialSpec, lam_grid, trace: FlowTrace | None = None,
                  nquad: int | None = None, phase_tol: float = 1e-4) -> ThmReport:
    """Check existence and the equality ``xi = -mu(-1)`` on a grid.

    At each energy: ``xi`` is defined exactly when no eigenphase is within
    ``phase_tol`` of ``pi``, and ``xi = -mu(pi, lam)`` as integers.  Grid
    points where either side is undefined are listed in ``excluded``.
    """
    from .xindex import is_defined, xi_essential

    lams = np.asarray(lam_grid, dtype=float)
    if trace is None:
        trace = build_flow_trace(V, float(lams[0]), include=lams)
    suffix = trace.suffix_flow(np.pi)
    xs, mus, dists, bad, excluded = [], [], [], [], []
    for lam in lams:
        i = trace.index_of(lam)
        x = xi_essential(lam, V, None, nquad)
        dist = trace.endpoint_distance(np.pi, i)
        mu = -int(suffix[i])
        xs.append(x)
        mus.append(mu)
        dists.append(dist)
        if is_defined(x) != (dist > phase_tol):
            bad.append((float(lam), "existence", x, dist))
        elif not is_defined(x):
            excluded.append(float(lam))
        elif x != -mu:
            bad.append((float(lam), "value", x, mu))
    return ThmReport(lambdas=lams, xi=xs, mu=mus, phase_dist=np.array(dists), violations=bad,
                     excluded=excluded)


def kernel_dim_check(lamstar: float, theta: float, V: PotentialSpec, J=None,
                     nquad: int | None = None):
    """``(min singular value of J + A0 + cot(theta/2) B0, phase distance to theta)``."""
    op = a0_b0_1d(lamstar, V, nquad)
    sv = min_singval(assemble_bsmat(J, op, theta))
    ph = eigenphases(smatrix(lamstar, V))
    return sv, float(np.min(_circ(ph, theta)))
