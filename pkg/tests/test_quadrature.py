import numpy as np
import pytest

from specidx.quadrature import nystrom_matrix, panel_rule, richardson


def test_panel_rule_integrates_polynomials_and_respects_breakpoints():
    rule = panel_rule(-2.0, 3.0, 64, breakpoints=(0.7,))
    assert rule.nodes.size % rule.panel_size == 0
    assert np.any(np.isclose(rule.edges, 0.7))
    assert np.sum(rule.weights * rule.nodes**5) == pytest.approx((3**6 - 2**6) / 6, rel=1e-13)


def test_panel_rule_exact_for_piecewise_smooth():
    rule = panel_rule(-1.0, 1.0, 32, breakpoints=(0.2,))
    f = np.where(rule.nodes < 0.2, rule.nodes**2, 1.0)
    exact = (0.2**3 + 1) / 3 + 0.8
    assert np.sum(rule.weights * f) == pytest.approx(exact, rel=1e-13)


def test_bad_interval():
    with pytest.raises(ValueError):
        panel_rule(1.0, 1.0, 16)


def test_richardson_removes_linear_and_quadratic_error():
    f = lambda h: 2.0 + 3 * h - 5 * h**2
    vals = [f(0.1), f(0.05), f(0.025)]
    assert richardson(vals, 2.0, 1) == pytest.approx(2.0, abs=1e-13)


def _kink_trace(n, kink):
    # kernel exp(-|x-y|) on [0,1]; its trace is 1 for either correction
    rule = panel_rule(0.0, 1.0, n)
    M = nystrom_matrix(lambda x, y: np.exp(-np.abs(x - y)), lambda x: np.ones_like(x), rule,
                       kink=kink)
    return np.linalg.eigvalsh(M)[-1]


def test_kink_correction_converges_fast():
    # top eigenvalue of exp(-|x-y|) on [0, 1] solves tan(w) = 2w/(w^2-1) with mu = 2/(1+w^2)
    from scipy.optimize import brentq
    w = brentq(lambda w: np.tan(w) * (w * w - 1) - 2 * w, 1.0 + 1e-9, np.pi / 2 - 1e-9)
    exact = 2 / (1 + w * w)
    err_plain = abs(_kink_trace(64, False) - exact)
    err_kink = abs(_kink_trace(64, True) - exact)
    assert err_kink < 1e-11
    assert err_plain > 100 * err_kink


def test_nystrom_symmetric():
    rule = panel_rule(-1.0, 2.0, 48)
    M = nystrom_matrix(lambda x, y: np.cos(x - y), lambda x: np.exp(-x * x), rule)
    assert np.allclose(M, M.T)
