"""Pairs of orthogonal projections in finite dimension.

The index of a pair is ``dim Ker(P-Q-I) - dim Ker(P-Q+I)``.  Everything here
works on dense matrices; the eigenvalues of ``P - Q`` are computed once and
clustered with an absolute tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import DegenerateBasis, NotFredholm

IDEMPOTENCY_TOL = 1e-10
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class OrthProjection:
    """Orthogonal projection stored as a dense self-adjoint matrix.

    Use :meth:`from_matrix` (or :func:`make_projection`) to build one; the
    constructor itself trusts its arguments.
    """

    matrix: np.ndarray
    dim: int
    idem_residual: float

    @classmethod
    def from_matrix(cls, matrix, check: bool = True) -> "OrthProjection":
        raw = np.asarray(matrix)
        if raw.ndim != 2 or raw.shape[0] != raw.shape[1]:
            raise ValueError(f"projection must be square, got shape {raw.shape}")
        m = 0.5 * (raw + raw.conj().T)
        resid = _hermnorm(m @ m - m)
        if check:
            asym = _hermnorm(1j * (raw - raw.conj().T))
            if asym > SYMMETRY_TOL * max(1.0, _hermnorm(m)):
                raise ValueError(f"matrix is not self-adjoint (residual {asym:.2e})")
            if resid > IDEMPOTENCY_TOL:
                raise ValueError(f"matrix is not idempotent (residual {resid:.2e})")
        m.setflags(write=False)
        return cls(matrix=m, dim=m.shape[0], idem_residual=float(resid))

    @property
    def rank(self) -> int:
        """Rank from the trace, cross-checked against the eigenvalue count."""
        r = int(round(float(np.trace(self.matrix).real)))
        if self.dim:
            count = int(np.sum(sla.eigvalsh(self.matrix) > 0.5))
            if count != r:
                raise ValueError(f"trace rank {r} disagrees with eigenvalue count {count}")
        return r


@dataclass(frozen=True)
class IndexCertificate:
    value: int
    plus_cluster: int
    minus_cluster: int
    gap_ok: bool
    spectrum: np.ndarray = field(repr=False)


def _hermnorm(a) -> float:
    """Operator norm of a self-adjoint matrix (the largest |eigenvalue|)."""
    if a.size == 0:
        return 0.0
    a = 0.5 * (a + a.conj().T)
    return float(np.abs(sla.eigvalsh(a)).max())


def make_projection(basis, dim: int | None = None) -> OrthProjection:
    """Orthogonal projection onto the span of ``basis``.

    Parameters
    ----------
    basis : sequence of 1-D arrays
        Spanning vectors; must be linearly independent.
    dim : int, optional
        Ambient dimension.  Required when ``basis`` is empty.

    Raises
    ------
    DegenerateBasis
        If the smallest singular value of the basis matrix is below 1e-10.
    """
    vecs = [np.asarray(v) for v in basis]
    if not vecs:
        if dim is None:
            raise ValueError("dim is required for an empty basis")
        return OrthProjection.from_matrix(np.zeros((dim, dim)))
    b = np.column_stack(vecs)
    if dim is not None and b.shape[0] != dim:
        raise ValueError(f"basis vectors have length {b.shape[0]}, expected {dim}")
    if b.shape[1] > b.shape[0]:
        raise DegenerateBasis("more vectors than the ambient dimension")
    smin = sla.svdvals(b).min()
    if smin <= 1e-10:
        raise DegenerateBasis(f"smallest singular value {smin:.2e} <= 1e-10")
    q, _ = np.linalg.qr(b)
    return OrthProjection.from_matrix(q @ q.conj().T)


def projection_from_eigvecs(vecs: np.ndarray) -> OrthProjection:
    """Projection onto orthonormal columns ``vecs`` (no independence test)."""
    n = vecs.shape[0]
    if vecs.shape[1] == 0:
        return OrthProjection.from_matrix(np.zeros((n, n), dtype=vecs.dtype))
    # P^2 - P = V (V*V - I) V*, so the small Gram defect measures idempotency
    resid = _hermnorm(vecs.conj().T @ vecs - np.eye(vecs.shape[1]))
    if resid > IDEMPOTENCY_TOL:
        raise ValueError(f"columns are not orthonormal (residual {resid:.2e})")
    m = vecs @ vecs.conj().T
    m = 0.5 * (m + m.conj().T)
    m.setflags(write=False)
    return OrthProjection(matrix=m, dim=n, idem_residual=resid)


def _difference_spectrum(P: OrthProjection, Q: OrthProjection) -> np.ndarray:
    if P.dim != Q.dim:
        raise ValueError(f"dimension mismatch: {P.dim} vs {Q.dim}")
    if P.dim == 0:
        return np.zeros(0)
    return sla.eigvalsh(P.matrix - Q.matrix)


def index_pair(P: OrthProjection, Q: OrthProjection, tol: float = 1e-6,
               gap: float = 1e-3) -> IndexCertificate:
    """Index of the pair ``(P, Q)`` with a spectral-gap certificate.

    Eigenvalues of ``P - Q`` within ``tol`` of +1 (resp. -1) are counted as
    the kernel of ``P - Q - I`` (resp. ``P - Q + I``).  Any eigenvalue in the
    band between ``tol`` and ``gap`` away from +-1 makes the count ambiguous
    and raises :class:`NotFredholm`.
    """
    if not 0 < tol < gap < 1:
        raise ValueError(f"need 0 < tol < gap < 1, got tol={tol}, gap={gap}")
    ev = _difference_spectrum(P, Q)
    plus = int(np.sum(ev >= 1 - tol))
    minus = int(np.sum(ev <= -1 + tol))
    band = ((ev > 1 - gap) & (ev < 1 - tol)) | ((ev > -1 + tol) & (ev < -1 + gap))
    cert = IndexCertificate(value=plus - minus, plus_cluster=plus, minus_cluster=minus,
                            gap_ok=not bool(band.any()), spectrum=ev)
    if not cert.gap_ok:
        raise NotFredholm(
            f"{int(band.sum())} eigenvalue(s) of P-Q inside the ambiguous band "
            f"(tol={tol:g}, gap={gap:g})", certificate=cert)
    return cert


def eigenvalue_pairing_report(P: OrthProjection, Q: OrthProjection, tol: float = 1e-9):
    """Multiplicities of +lam and -lam for every eigenvalue magnitude of P - Q.

    Returns a list of ``(lam, mult_plus, mult_minus)`` for each cluster of
    magnitudes in ``(tol, 1 - tol)``.  Eigenvalues of a difference of
    projections come in +- pairs there, so every entry should have equal
    multiplicities; see :func:`pairing_violations`.
    """
    ev = _difference_spectrum(P, Q)
    mid = ev[(np.abs(ev) > tol) & (np.abs(ev) < 1 - tol)]
    if mid.size == 0:
        return []
    order = np.argsort(np.abs(mid))
    mags, signs = np.abs(mid)[order], np.sign(mid)[order]
    report = []
    start = 0
    for i in range(1, mags.size + 1):
        if i == mags.size or mags[i] - mags[i - 1] > tol:
            s = signs[start:i]
            report.append((float(mags[start:i].mean()), int(np.sum(s > 0)), int(np.sum(s < 0))))
            start = i
    return report


def pairing_violations(report):
    return [entry for entry in report if entry[1] != entry[2]]


def trace_index_check(P: OrthProjection, Q: OrthProjection, tol: float = 1e-6):
    """Compare ``Tr(P - Q)`` with ``index_pair(P, Q)``.

    Returns ``(trace, index, agree)`` with ``agree = |trace - index| < 1e-8``.
    """
    trace = float(np.trace(P.matrix - Q.matrix).real) if P.dim else 0.0
    index = index_pair(P, Q, tol=tol).value
    return trace, index, abs(trace - index) < 1e-8
