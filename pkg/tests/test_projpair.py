import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specidx.errors import DegenerateBasis, NotFredholm
from specidx.projpair import (OrthProjection, eigenvalue_pairing_report, index_pair,
                              make_projection, pairing_violations, projection_from_eigvecs,
                              trace_index_check)


def line(angle, dim=2):
    v = np.zeros(dim)
    v[0], v[1] = np.cos(angle), np.sin(angle)
    return make_projection([v], dim)


def test_identical_projections_have_index_zero():
    P = line(0.3)
    cert = index_pair(P, P)
    assert cert.value == 0 and cert.gap_ok


def test_orthogonal_lines_pair_off():
    # P - Q has eigenvalues +1 and -1, which cancel
    cert = index_pair(line(0.0), line(np.pi / 2))
    assert (cert.plus_cluster, cert.minus_cluster, cert.value) == (1, 1, 0)


def test_nested_subspaces():
    e = np.eye(5)
    P = make_projection(e[:3], 5)
    Q = make_projection(e[:1], 5)
    assert index_pair(P, Q).value == 2
    assert index_pair(Q, P).value == -2


def test_ambiguous_band_raises_with_certificate():
    # eigenvalues +-sin(angle) sit 5e-4 below 1
    angle = np.arcsin(1 - 5e-4)
    with pytest.raises(NotFredholm) as info:
        index_pair(line(0.0), line(angle))
    assert info.value.certificate.value == 0
    assert not info.value.certificate.gap_ok


def test_tolerances_validated():
    with pytest.raises(ValueError):
        index_pair(line(0.0), line(0.1), tol=1e-2, gap=1e-3)


def test_degenerate_basis():
    v = np.array([1.0, 2.0, 3.0])
    with pytest.raises(DegenerateBasis):
        make_projection([v, 2 * v], 3)


def test_from_matrix_rejects_non_projection():
    with pytest.raises(ValueError):
        OrthProjection.from_matrix(np.diag([1.0, 0.5]))
    with pytest.raises(ValueError):
        OrthProjection.from_matrix(np.array([[1.0, 1.0], [0.0, 0.0]]))


def test_eigvec_projection_rank():
    q, _ = np.linalg.qr(np.random.default_rng(0).normal(size=(6, 6)))
    P = projection_from_eigvecs(q[:, :4])
    assert P.rank == 4
    assert P.idem_residual < 1e-12


def test_empty_basis_needs_dim():
    with pytest.raises(ValueError):
        make_projection([])
    assert make_projection([], 4).rank == 0


@settings(max_examples=60, deadline=None)
@given(n=st.integers(2, 10), data=st.data())
def test_random_pairs(n, data):
    p = data.draw(st.integers(0, n))
    q = data.draw(st.integers(0, n))
    seed = data.draw(st.integers(0, 2**31 - 1))
    rng = np.random.default_rng(seed)
    P = make_projection(rng.normal(size=(p, n)), n)
    Q = make_projection(rng.normal(size=(q, n)), n)
    try:
        value = index_pair(P, Q).value
    except NotFredholm as exc:
        value = exc.certificate.value
    assert value == p - q
    assert pairing_violations(eigenvalue_pairing_report(P, Q, 1e-9)) == []
    assert abs(np.trace(P.matrix - Q.matrix) - value) < 1e-8


def test_trace_index_check():
    e = np.eye(4)
    tr, idx, ok = trace_index_check(make_projection(e[:3], 4), make_projection(e[:1], 4))
    assert ok and idx == 2 and tr == pytest.approx(2.0)


def test_pairing_report_lists_symmetric_clusters():
    rep = eigenvalue_pairing_report(line(0.0), line(0.4))
    assert len(rep) == 1
    mag, plus, minus = rep[0]
    assert mag == pytest.approx(np.sin(0.4))
    assert plus == minus == 1
