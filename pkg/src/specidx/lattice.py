"""Finite-difference Schrödinger operators on a Dirichlet box.

``H0 = -d^2/dx^2`` is discretised with the 3-point stencil on ``n`` interior
points of ``(a, b)``; ``H = H0 + diag(V(x_j))``.  Sandwiched resolvents
``G (H - z)^{-1} G`` with ``G = |V|^{1/2}`` are formed by tridiagonal solves
against unit vectors on the support of ``V`` only.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg as sla
from scipy.optimize import brentq

from .errors import EigenvalueAtThreshold, SingularShift, SupportExceedsBox
from .potentials import SUPPORT_REL, PotentialSpec
from .projpair import OrthProjection, index_pair, projection_from_eigvecs

THRESHOLD_REL = 1e-9
SHIFT_REL = 1e-12


@dataclass(frozen=True)
class Grid1D:
    a: float
    b: float
    n: int

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError(f"need b > a, got ({self.a}, {self.b})")
        if self.n < 3:
            raise ValueError(f"need at least 3 interior points, got {self.n}")

    @property
    def h(self) -> float:
        return (self.b - self.a) / (self.n + 1)

    @property
    def points(self) -> np.ndarray:
        return self.a + self.h * np.arange(1, self.n + 1)


@dataclass(frozen=True, eq=False)
class DenseSelfAdjoint:
    """Self-adjoint matrix with optional grid metadata.

    The eigen-decomposition is computed lazily once and then reused; the
    matrix itself is read-only.
    """

    matrix: np.ndarray
    grid: Grid1D | None = None
    label: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"square matrix required, got shape {m.shape}")
        scale = np.abs(m).max() if m.size else 0.0
        asym = np.abs(m - m.conj().T).max() if m.size else 0.0
        if asym > 1e-12 * max(scale, 1e-300) and asym > 0:
            raise ValueError(f"matrix is not self-adjoint (max asymmetry {asym:.2e})")
        sym = 0.5 * (m + m.conj().T)
        sym.setflags(write=False)
        object.__setattr__(self, "matrix", sym)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def eigh(self):
        w, v = sla.eigh(self.matrix)
        w.setflags(write=False)
        v.setflags(write=False)
        return w, v

    @property
    def eigenvalues(self) -> np.ndarray:
        if "eigh" in self.__dict__:
            return self.eigh[0]
        return self._eigvals

    @cached_property
    def _eigvals(self):
        w = sla.eigvalsh(self.matrix)
        w.setflags(write=False)
        return w

    @cached_property
    def norm(self) -> float:
        ev = self.eigenvalues
        return float(np.abs(ev).max()) if ev.size else 0.0

    def tridiagonal_bands(self):
        """``(diag, offdiag)`` if the matrix is tridiagonal, else ``None``."""
        m = self.matrix
        if self.n < 3:
            return None
        off = np.diagonal(m, 1)
        if np.count_nonzero(np.triu(m, 2)) or np.iscomplexobj(m):
            return None
        return np.diagonal(m).copy(), off.copy()


@dataclass(frozen=True, eq=False)
class SandwichedResolvent:
    """``G (H - z)^{-1} G`` restricted to the support of ``V``.

    ``matrix`` acts on vectors indexed by the support points ``nodes``.  With
    lattice weight ``h`` the integral kernel is ``matrix / h``.
    """

    matrix: np.ndarray
    z: complex
    weights: np.ndarray
    nodes: np.ndarray
    index: np.ndarray
    sign: np.ndarray


def build_h0(grid: Grid1D) -> DenseSelfAdjoint:
    n, h = grid.n, grid.h
    m = (np.diag(np.full(n, 2.0)) - np.diag(np.ones(n - 1), 1) - np.diag(np.ones(n - 1), -1)) / h**2
    return DenseSelfAdjoint(m, grid, "H0")


def build_h(grid: Grid1D, V: PotentialSpec) -> DenseSelfAdjoint:
    if V.support_radius > min(abs(grid.a), abs(grid.b)):
        raise SupportExceedsBox(
            f"support radius {V.support_radius:g} exceeds box ({grid.a:g}, {grid.b:g})")
    m = build_h0(grid).matrix + np.diag(V(grid.points))
    return DenseSelfAdjoint(m, grid, f"H[{V.name}]")


def _check_threshold(ev: np.ndarray, lam: float, scale: float):
    if ev.size and np.min(np.abs(ev - lam)) <= THRESHOLD_REL * max(scale, 1.0):
        raise EigenvalueAtThreshold(
            f"threshold {lam:g} within {THRESHOLD_REL:g}*||M|| of an eigenvalue")


def counting(M: DenseSelfAdjoint, lam: float) -> int:
    """Number of eigenvalues strictly below ``lam``."""
    ev = M.eigenvalues
    _check_threshold(ev, lam, M.norm)
    return int(np.sum(ev < lam))


def spectral_projection(M: DenseSelfAdjoint, lam: float) -> OrthProjection:
    """``E((-inf, lam); M)`` assembled from eigenvectors."""
    w, v = M.eigh
    _check_threshold(w, lam, M.norm)
    return projection_from_eigvecs(v[:, w < lam])


def xi_direct(H0d: DenseSelfAdjoint, Hd: DenseSelfAdjoint, lam: float) -> int:
    """Index of the pair ``(E((-inf,lam); H0d), E((-inf,lam); Hd))``."""
    P = spectral_projection(H0d, lam)
    Q = spectral_projection(Hd, lam)
    return index_pair(P, Q).value


def support_indices(V: PotentialSpec, x: np.ndarray):
    """Grid indices where ``|V| > 1e-14 max|V|``, with ``|V|^(1/2)`` and ``sign V``."""
    v = V(x)
    vmax = np.abs(v).max() if v.size else 0.0
    if vmax == 0:
        return np.zeros(0, int), np.zeros(0), np.zeros(0)
    idx = np.flatnonzero(np.abs(v) > SUPPORT_REL * vmax)
    vs = v[idx]
    return idx, np.sqrt(np.abs(vs)), np.where(vs >= 0, 1.0, -1.0)


def banded_sandwich(diag, off, idx, g, z, rows=None):
    """``g_i [(T - z)^{-1}]_{r, idx_j} g_j`` for a symmetric tridiagonal ``T``.

    Parameters
    ----------
    diag, off : ndarray
        Main and first off-diagonal of ``T``.
    idx : ndarray of int
        Column indices (right-hand sides).
    g : ndarray
        Weights applied on both sides (same length as ``idx``).
    z : complex
    rows : ndarray of int, optional
        Row indices to return; defaults to ``idx`` (with ``g`` applied).  When
        given, no left weight is applied.
    """
    n = diag.size
    dtype = complex if np.iscomplexobj(z) and np.imag(z) != 0 else float
    ab = np.zeros((3, n), dtype=dtype)
    ab[0, 1:] = off
    ab[1] = diag - z
    ab[2, :-1] = off
    rhs = np.zeros((n, idx.size), dtype=dtype)
    rhs[idx, np.arange(idx.size)] = g
    try:
        sol = sla.solve_banded((1, 1), ab, rhs, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise SingularShift(f"shifted operator singular at z={z}") from exc
    if not np.all(np.isfinite(sol)):
        raise SingularShift(f"shifted operator singular at z={z}")
    if rows is None:
        return g[:, None] * sol[idx]
    return sol[rows]


def _sandwich(Md: DenseSelfAdjoint, V: PotentialSpec, z) -> SandwichedResolvent:
    if Md.grid is None:
        raise ValueError("operator needs grid metadata")
    z = complex(z)
    if z.imag == 0:
        z = z.real
        dist = np.min(np.abs(Md.eigenvalues - z))
        if dist <= SHIFT_REL * Md.norm:
            raise SingularShift(f"z={z:g} is within {dist:.2e} of the spectrum")
    x = Md.grid.points
    idx, g, sgn = support_indices(V, x)
    h = Md.grid.h
    if idx.size == 0:
        mat = np.zeros((0, 0), dtype=complex if isinstance(z, complex) else float)
    else:
        bands = Md.tridiagonal_bands()
        if bands is not None:
            mat = banded_sandwich(bands[0], bands[1], idx, g, z)
        else:
            rhs = np.zeros((Md.n, idx.size))
            rhs[idx, np.arange(idx.size)] = g
            try:
                sol = sla.solve(Md.matrix - z * np.eye(Md.n), rhs)
            except sla.LinAlgError as exc:
                raise SingularShift(str(exc)) from exc
            mat = g[:, None] * sol[idx]
    return SandwichedResolvent(matrix=mat, z=z, weights=np.full(idx.size, h),
                               nodes=x[idx], index=idx, sign=sgn)


def t0_matrix(H0d: DenseSelfAdjoint, V: PotentialSpec, z) -> SandwichedResolvent:
    """Free sandwiched resolvent ``G (H0d - z)^{-1} G`` on the support of ``V``."""
    return _sandwich(H0d, V, z)


def t_matrix(Hd: DenseSelfAdjoint, V: PotentialSpec, z) -> SandwichedResolvent:
    """Perturbed sandwiched resolvent ``G (Hd - z)^{-1} G``."""
    return _sandwich(Hd, V, z)


def resolvent_identity_residual(H0d, Hd, V: PotentialSpec, z) -> float:
    """Operator-norm residual of ``(J + T0(z)) (J - J T(z) J) - I``."""
    T0 = t0_matrix(H0d, V, z)
    T = t_matrix(Hd, V, z)
    if T0.matrix.size == 0:
        return 0.0
    J = np.diag(T0.sign)
    lhs = (J + T0.matrix) @ (J - J @ T.matrix @ J)
    return float(np.linalg.norm(lhs - np.eye(J.shape[0]), 2))


def bs_matrix(H0d: DenseSelfAdjoint, V: PotentialSpec, lam: float) -> DenseSelfAdjoint:
    """``J^{-1} + T0(lam)`` for real ``lam`` below the spectrum of ``H0d``."""
    T0 = t0_matrix(H0d, V, lam)
    return DenseSelfAdjoint(np.diag(T0.sign) + T0.matrix, None, f"J+T0({lam:g})")


def xi_bs(H0d: DenseSelfAdjoint, V: PotentialSpec, lam: float) -> int:
    """Index route below the spectrum: ``index(E(R_-; J + T0(lam)), E(R_-; J))``.

    Equals ``N(R_-; J + T0) - N(R_-; J)``, which is ``xi_direct`` for
    ``lam < min spec(H0d)``.
    """
    T0 = t0_matrix(H0d, V, lam)
    M = DenseSelfAdjoint(np.diag(T0.sign) + T0.matrix, None, f"J+T0({lam:g})")
    Jd = DenseSelfAdjoint(np.diag(T0.sign), None, "J")
    P = spectral_projection(M, 0.0)
    Q = spectral_projection(Jd, 0.0)
    return index_pair(P, Q).value


def _bs_count(H0d, V, lam):
    """Eigenvalues of ``Hd`` below ``lam`` via the sign-changed count."""
    T0 = t0_matrix(H0d, V, lam)
    ev = sla.eigvalsh(np.diag(T0.sign) + T0.matrix)
    return int(np.sum(T0.sign < 0)) - int(np.sum(ev < 0))


def bs_bound_states(H0d: DenseSelfAdjoint, V: PotentialSpec, xtol: float = 1e-10) -> list:
    """Eigenvalues of ``H0d + V`` below 0, located through ``T0(lam)`` alone.

    For ``V <= 0`` the j-th largest eigenvalue of ``T0(lam)`` is increasing in
    ``lam`` and equals 1 exactly at the j-th bound state, so each one is a
    bracketed root.  For mixed-sign ``V`` the eigenvalue count below ``lam``
    (read off the inertia of ``J + T0(lam)``) is bisected instead.
    """
    if H0d.grid is None:
        raise ValueError("operator needs grid metadata")
    idx, g, sgn = support_indices(V, H0d.grid.points)
    if idx.size == 0 or np.all(sgn > 0):
        return []
    lam_lo = float(V(H0d.grid.points[idx]).min()) - 1.0
    top = min(0.0, float(H0d.eigenvalues[0]))
    lam_up = top - 1e-12 * max(1.0, abs(top)) if top < 0 else -1e-13
    if np.all(sgn < 0):
        return _bound_states_definite(H0d, V, lam_lo, lam_up, xtol)
    return _bound_states_bisect(H0d, V, lam_lo, lam_up, xtol)


def _bound_states_definite(H0d, V, lam_lo, lam_up, xtol):
    def top_eigs(lam, m):
        t = t0_matrix(H0d, V, lam).matrix
        s = t.shape[0]
        return sla.eigvalsh(t, subset_by_index=[s - m, s - 1])[::-1]

    count = int(np.sum(sla.eigvalsh(t0_matrix(H0d, V, lam_up).matrix) > 1))
    roots = []
    for j in range(count):
        f = lambda lam, j=j: top_eigs(lam, j + 1)[j] - 1.0
        roots.append(brentq(f, lam_lo, lam_up, xtol=xtol, rtol=4 * np.finfo(float).eps))
    return sorted(roots)


def _bound_states_bisect(H0d, V, lam_lo, lam_up, xtol):
    roots = []
    c_lo, c_up = _bs_count(H0d, V, lam_lo), _bs_count(H0d, V, lam_up)
    stack = [(lam_lo, c_lo, lam_up, c_up)]
    while stack:
        a, ca, b, cb = stack.pop()
        if ca == cb:
            continue
        if b - a <= xtol:
            roots.extend([0.5 * (a + b)] * (cb - ca))
            continue
        m = 0.5 * (a + b)
        cm = _bs_count(H0d, V, m)
        stack.append((a, ca, m, cm))
        stack.append((m, cm, b, cb))
    return sorted(roots)
