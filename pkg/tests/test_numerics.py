"""Numeric kernels: quartic roots, golden section, barrier QCQP, Rayleigh."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from afsec.errors import BracketError, SignPatternError, UnboundedObjectiveError
from afsec.numerics import (
    GoldenSectionConfig,
    QcqpProblem,
    QuarticCoeffs,
    golden_section_max,
    iteration_bound,
    positive_quartic_root,
    rayleigh_direction,
    solve_linear_qcqp,
)


def _bisect_oracle(q):
    # independent bracketing + bisection, written from the sign-change
    # property alone: q(0) = c0 < 0 and q grows like x^4
    hi = 1.0
    while q(hi) <= 0.0:
        hi *= 2.0
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if q(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _random_valid_quartic(rng):
    c3, c2, c1 = rng.uniform(0.0, 5.0, 3)
    return QuarticCoeffs(c3, c2, c1, -rng.uniform(0.1, 50.0))


def test_quartic_worked_roots():
    assert_allclose(positive_quartic_root(QuarticCoeffs(0, 0, 0, -16.0)), 2.0, rtol=1e-12)
    # degenerate parameter collapse: only the constant term survives and the
    # polynomial reduces to x^4 = 1/(s^2 alpha^2), here s=2, alpha=0.5
    assert_allclose(positive_quartic_root(QuarticCoeffs(0, 0, 0, -1.0)), 1.0, rtol=1e-12)


def test_quartic_matches_bisection_oracle():
    rng = np.random.default_rng(21)
    for _ in range(200):
        q = _random_valid_quartic(rng)
        root = positive_quartic_root(q)
        assert_allclose(root, _bisect_oracle(q), rtol=1e-10, atol=1e-12)


def test_quartic_residual_and_sign_structure():
    """Residual bound plus one sign change on (0, 10 root]."""
    rng = np.random.default_rng(22)
    for _ in range(200):
        q = _random_valid_quartic(rng)
        root = positive_quartic_root(q)
        assert abs(q(root)) <= 1e-10 * max(1.0, abs(q.c0))
        below = np.linspace(1e-9, root * (1 - 1e-7), 500)
        above = np.linspace(root * (1 + 1e-7), 10 * root, 500)
        assert np.all(q(below) < 0.0)
        assert np.all(q(above) > 0.0)


def test_quartic_rejects_bad_sign_pattern():
    with pytest.raises(SignPatternError):
        positive_quartic_root(QuarticCoeffs(0, 0, 0, 1.0))  # no positive root
    with pytest.raises(SignPatternError):
        positive_quartic_root(QuarticCoeffs(-1.0, 1.0, 0, -1.0))  # three changes
    with pytest.raises(SignPatternError):
        positive_quartic_root(QuarticCoeffs(1.0, 1.0, 1.0, 0.0))  # c0 not negative


def test_iteration_bound_values():
    assert iteration_bound(1.0, 0.001) == 15
    assert iteration_bound(1.0, 1.0) == 0
    assert iteration_bound(10.0, 0.01) == 15
    with pytest.raises(ValueError):
        iteration_bound(0.0, 0.1)
    with pytest.raises(ValueError):
        iteration_bound(1.0, -0.1)


def test_golden_parabola():
    cfg = GoldenSectionConfig(0.0, 2.0, 1e-4)
    res = golden_section_max(lambda x: -((x - 1.0) ** 2), cfg)
    assert abs(res.eta_star - 1.0) <= 1e-4
    assert res.bracket[1] - res.bracket[0] <= 1e-4
    assert res.iterations <= cfg.max_iter


def test_golden_constant_function():
    res = golden_section_max(lambda x: 3.5, GoldenSectionConfig(2.0, 5.0, 0.01))
    assert res.f_star == 3.5
    assert 2.0 <= res.eta_star <= 5.0


def test_golden_iteration_count_bound():
    # range/delta = 1000: bound is ceil(2.08 ln 1000) = 15 shrink rounds,
    # plus the 2 start-up evaluations
    cfg = GoldenSectionConfig(0.0, 1.0, 0.001)
    assert cfg.max_iter == 17
    res = golden_section_max(lambda x: -(x - 0.3) ** 2, cfg)
    assert res.iterations <= 17


def test_golden_bracket_and_shrink_factor():
    """Final bracket contains the best sample and equals the initial width
    shrunk by the golden ratio once per post-startup iteration."""
    rng = np.random.default_rng(23)
    for _ in range(25):
        lo = rng.uniform(-2, 0)
        hi = lo + rng.uniform(0.5, 3)
        peak = rng.uniform(lo, hi)
        cfg = GoldenSectionConfig(lo, hi, 1e-5)
        res = golden_section_max(lambda x: -((x - peak) ** 2), cfg)
        xs = [x for x, _ in res.history]
        best_x = xs[int(np.argmax([v for _, v in res.history]))]
        a, b = res.bracket
        assert a - 1e-12 <= best_x <= b + 1e-12
        width = (hi - lo) * ((np.sqrt(5.0) - 1.0) / 2.0) ** (res.iterations - 2)
        assert_allclose(b - a, width, rtol=1e-9)


def test_golden_short_bracket_returns_midpoint():
    res = golden_section_max(lambda x: x, GoldenSectionConfig(0.0, 1.0, 2.0))
    assert res.eta_star == 0.5
    assert res.iterations == 1


def test_golden_budget_exhausted():
    cfg = GoldenSectionConfig(0.0, 1.0, 0.001, max_iter=16)
    with pytest.raises(BracketError) as err:
        golden_section_max(lambda x: -((x - 0.25) ** 2), cfg)
    a, b = err.value.bracket
    assert 0.0 <= a < b <= 1.0
    x_best, f_best = err.value.best
    assert a - 1e-12 <= x_best <= b + 1e-12 or f_best <= 0.0


def test_golden_config_validation():
    with pytest.raises(ValueError):
        GoldenSectionConfig(1.0, 1.0, 0.1)
    with pytest.raises(ValueError):
        GoldenSectionConfig(0.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        GoldenSectionConfig(0.0, 1.0, 0.001, max_iter=10)


def _random_pd(rng, n):
    R = rng.normal(size=(n, n))
    return R @ R.T + 0.3 * np.eye(n)


def test_qcqp_single_ellipsoid_closed_form():
    rng = np.random.default_rng(31)
    for _ in range(30):
        n = rng.integers(1, 6)
        d = rng.uniform(0.2, 5.0, n)
        c = rng.normal(size=n)
        if np.all(c == 0):
            continue
        sol = solve_linear_qcqp(QcqpProblem(c, (np.diag(d),)))
        want = np.sqrt(float(c @ (c / d)))
        assert_allclose(sol.objective, want, rtol=1e-7)
        assert_allclose(sol.v, (c / d) / want, rtol=1e-6, atol=1e-9)


def test_qcqp_scalar_case():
    sol = solve_linear_qcqp(QcqpProblem([1.0], ([[2.0]],)))
    assert_allclose(sol.objective, 1.0 / np.sqrt(2.0), rtol=1e-8)


def test_qcqp_two_ellipsoids_vs_boundary_oracle():
    """The planar optimum sits on the boundary max_j v.A_j v = 1, which a
    polar sweep parameterizes exactly: v(t) = u(t)/sqrt(max_j u.A_j u)."""
    rng = np.random.default_rng(32)
    theta = np.linspace(0.0, 2.0 * np.pi, 10**6, endpoint=False)
    U = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    for _ in range(2):
        A1, A2 = _random_pd(rng, 2), _random_pd(rng, 2)
        c = rng.normal(size=2)
        sol = solve_linear_qcqp(QcqpProblem(c, (A1, A2)))
        quad = np.maximum(np.einsum("ni,ij,nj->n", U, A1, U),
                          np.einsum("ni,ij,nj->n", U, A2, U))
        best = float(np.max((U @ c) / np.sqrt(quad)))
        assert abs(sol.objective - best) <= 1e-4
        for A in (A1, A2):
            assert float(sol.v @ A @ sol.v) <= 1.0 + 1e-9


def test_qcqp_sign_flip_invariance():
    rng = np.random.default_rng(33)
    for _ in range(10):
        n = rng.integers(2, 5)
        mats = tuple(_random_pd(rng, n) for _ in range(rng.integers(1, 4)))
        c = rng.normal(size=n)
        a = solve_linear_qcqp(QcqpProblem(c, mats)).objective
        b = solve_linear_qcqp(QcqpProblem(-c, mats)).objective
        assert_allclose(a, b, rtol=1e-7)


def test_qcqp_unbounded_detected():
    # rank deficient only: the feasible set contains a whole line
    A = np.array([[1.0, 0.0], [0.0, 0.0]])
    with pytest.raises(UnboundedObjectiveError):
        solve_linear_qcqp(QcqpProblem([0.0, 1.0], (A,)))


def test_qcqp_problem_validation():
    with pytest.raises(ValueError, match="symmetric"):
        QcqpProblem([1.0, 0.0], ([[1.0, 0.5], [0.0, 1.0]],))
    with pytest.raises(ValueError, match="constraint"):
        QcqpProblem([1.0], ())
    with pytest.raises(ValueError, match="shape"):
        QcqpProblem([1.0], (np.eye(2),))


def test_rayleigh_worked_values():
    v, val = rayleigh_direction([3.0, 4.0], np.eye(2))
    assert_allclose(val, 25.0)
    assert_allclose(v, [0.6, 0.8])
    _, val = rayleigh_direction([1.0, 1.0], np.diag([1.0, 4.0]))
    assert_allclose(val, 1.25)


def test_rayleigh_normalization_identity():
    rng = np.random.default_rng(34)
    for _ in range(50):
        n = rng.integers(1, 7)
        C = _random_pd(rng, n)
        h = rng.normal(size=n)
        if np.linalg.norm(h) < 1e-6:
            continue
        v, val = rayleigh_direction(h, C)
        assert_allclose(v @ C @ v, 1.0, atol=1e-10)
        assert abs(float(h @ v) ** 2 - val) <= 1e-10 * max(1.0, val)


def test_rayleigh_agrees_with_qcqp():
    rng = np.random.default_rng(35)
    for _ in range(10):
        n = rng.integers(2, 5)
        C = _random_pd(rng, n)
        h = rng.normal(size=n)
        _, val = rayleigh_direction(h, C)
        obj = solve_linear_qcqp(QcqpProblem(h, (C,))).objective
        assert_allclose(obj**2, val, rtol=1e-7)


def test_rayleigh_errors():
    with pytest.raises(ValueError, match="positive definite"):
        rayleigh_direction([1.0, 0.0], np.diag([1.0, -1.0]))
    with pytest.raises(ValueError, match="non-zero"):
        rayleigh_direction([0.0, 0.0], np.eye(2))
