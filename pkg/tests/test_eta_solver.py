"""Leakage-cap solver: transforms, bounds, inner problem, outer search."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from afsec.errors import NotDegradedError
from afsec.eta_solver import (
    EtaProblem,
    build_inner_problem,
    count_strict_local_maxima,
    eta_profile,
    eta_upper_bound,
    inner_solve,
    single_eav_fast_path,
    solve_iterative,
    transform_to_omega,
    transform_to_v,
)
from afsec.network import NetworkInstance, compute_beta_max, secrecy_rate, snr
from afsec.zero_forcing import solve_zero_forcing


def _degraded(rng, m, k, p_r_hi=8.0):
    h_s = rng.uniform(0.2, 1.8, m)
    h_d = rng.uniform(0.4, 1.6, m)
    h_e = h_d[None, :] * rng.uniform(0.05, 0.95, (k, m))
    return NetworkInstance(m, k, h_s, h_d, h_e, 1.0, rng.uniform(0.5, p_r_hi, m), 1.0)


def test_transform_round_trip():
    assert_allclose(transform_to_v([0.0, 0.0]), [0.0, 0.0])
    assert_allclose(transform_to_v([1.0, 0.0]), [1.0 / np.sqrt(2.0), 0.0])
    assert_allclose(transform_to_omega(transform_to_v([1.0, 0.0])), [1.0, 0.0], rtol=1e-14)
    rng = np.random.default_rng(71)
    for _ in range(100):
        omega = rng.uniform(-1, 1, rng.integers(1, 8))
        omega *= rng.uniform(0, 10) / max(1e-12, np.linalg.norm(omega))
        v = transform_to_v(omega)
        assert np.linalg.norm(v) < 1.0
        assert np.max(np.abs(transform_to_omega(v) - omega)) <= 1e-12 * (1 + np.max(np.abs(omega)))
    with pytest.raises(ValueError, match="unit ball"):
        transform_to_omega([1.0, 0.0])


def test_eta_upper_bound_worked():
    net = NetworkInstance(1, 1, [1.0], [2.0], [[1.0]], 1.0, [2.0], 1.0)
    # beta_max^2 = 2/(1+1) = 1, so dtilde = 1/1 + 1 = 2 and the cap is 1/2
    assert_allclose(eta_upper_bound(net, "sum"), 0.5, rtol=1e-12)
    assert_allclose(eta_upper_bound(net, "individual"), 0.5, rtol=1e-12)


def test_eta_upper_bound_large_budget_limit():
    rng = np.random.default_rng(72)
    h_s = rng.uniform(0.5, 1.5, 3)
    h_d = rng.uniform(0.8, 1.5, 3)
    h_e = h_d[None, :] * rng.uniform(0.3, 0.9, (1, 3))
    net = NetworkInstance(3, 1, h_s, h_d, h_e, 2.0, [1e9, 1e9, 1e9], 1.0)
    # 1/beta_tot vanishes and the bound tends to gamma * sum h_s^2
    assert_allclose(eta_upper_bound(net, "sum"), net.gamma_s * np.sum(h_s**2), rtol=1e-6)


def test_eta_upper_bound_dominates_sampling():
    """No feasible vector leaks more than the closed-form cap."""
    rng = np.random.default_rng(73)
    for _ in range(5):
        net = _degraded(rng, 3, int(rng.integers(1, 3)))
        bound = eta_upper_bound(net, "sum")
        r_tot = np.sqrt(np.sum(compute_beta_max(net) ** 2))
        P = rng.normal(size=(10**5, 3))
        P *= (rng.uniform(0, r_tot, 10**5) / np.linalg.norm(P, axis=1))[:, None]
        for j in range(net.k):
            a = net.h_s * net.h_e[j]
            snr_j = net.gamma_s * (P @ a) ** 2 / (1.0 + P**2 @ net.h_e[j] ** 2)
            assert np.max(snr_j) <= bound * (1 + 1e-12)


def test_eta_upper_bound_guards():
    net = NetworkInstance(1, 0, [1.0], [1.0], [], 1.0, [1.0], 1.0)
    with pytest.raises(ValueError, match="no eavesdroppers"):
        eta_upper_bound(net, "sum")
    with pytest.raises(ValueError, match="mode"):
        eta_upper_bound(_degraded(np.random.default_rng(0), 2, 1), "total")


def test_inner_matrix_scalar_worked():
    # rho = 0.5, a = h_s rho = 0.5, eta = 0.25: C = 0.25/0.25 + 1 - 0.25
    net = NetworkInstance(1, 1, [1.0], [1.0], [[0.5]], 1.0, [1.0], 1.0)
    prob = build_inner_problem(net, 0.25, "sum")
    assert_allclose(prob.constraints[0], [[1.75]], rtol=1e-14)
    assert_allclose(prob.constraints[0][0][0], 2.0 - 0.5**2)


def test_inner_constraint_counts():
    rng = np.random.default_rng(74)
    net = _degraded(rng, 2, 1)
    assert len(build_inner_problem(net, 0.3, "sum").constraints) == 2
    assert len(build_inner_problem(net, 0.3, "individual").constraints) == 3


def test_inner_matrices_positive_definite():
    rng = np.random.default_rng(75)
    for _ in range(20):
        net = _degraded(rng, int(rng.integers(1, 5)), int(rng.integers(1, 4)))
        eta = rng.uniform(0.01, 1.0) * eta_upper_bound(net, "sum")
        for A in build_inner_problem(net, eta, "individual").constraints:
            assert np.linalg.eigvalsh(A)[0] > 0.0


def test_inner_guards():
    rng = np.random.default_rng(76)
    net = _degraded(rng, 2, 1)
    with pytest.raises(ValueError, match="eta must be positive"):
        build_inner_problem(net, 0.0, "sum")
    with pytest.raises(ValueError, match="mode"):
        EtaProblem.from_network(net, "box")
    bad = NetworkInstance(2, 1, net.h_s, net.h_d, 1.5 * net.h_d[None, :],
                          net.p_s, net.p_r, net.sigma2)
    with pytest.raises(NotDegradedError):
        build_inner_problem(bad, 0.3, "sum")


def test_inner_solve_no_eavesdropper_closed_form():
    # max beta^2/(1+beta^2) over beta^2 <= 1: v* = 1/sqrt(2), snr_d = 1/2
    net = NetworkInstance(1, 0, [1.0], [1.0], [], 1.0, [2.0], 1.0)
    sol = inner_solve(net, 1.0, "sum")
    assert_allclose(sol.v, [1.0 / np.sqrt(2.0)], rtol=1e-6)
    assert_allclose(sol.snr_d, 0.5, rtol=1e-7)
    assert_allclose(sol.beta, [1.0], rtol=1e-6)


def test_inner_solve_constraint_fidelity():
    """Power budget respected, every leakage at or below the cap, and the
    v-space objective reproduces the beta-space destination SNR."""
    rng = np.random.default_rng(77)
    for _ in range(15):
        m = int(rng.integers(1, 5))
        net = _degraded(rng, m, int(rng.integers(1, 3)))
        mode = ("sum", "individual")[int(rng.integers(2))]
        eta = rng.uniform(0.05, 0.8) * eta_upper_bound(net, mode)
        sol = inner_solve(net, eta, mode)
        bmax = compute_beta_max(net)
        if mode == "sum":
            assert np.sum(sol.beta**2) <= np.sum(bmax**2) * (1 + 1e-9)
        else:
            assert np.all(np.abs(sol.beta) <= bmax * (1 + 1e-9))
        for j in range(net.k):
            assert snr(net, sol.beta, j) <= eta + 1e-8 * (1.0 + eta)
        assert_allclose(snr(net, sol.beta), sol.snr_d, rtol=1e-9)


def test_inner_tiny_cap_approaches_zero_forcing():
    rng = np.random.default_rng(78)
    for _ in range(3):
        net = _degraded(rng, 3, 1)
        zf = solve_zero_forcing(net)
        sol = inner_solve(net, 1e-8, "individual")
        rate = secrecy_rate(net, sol.beta).secrecy_rate
        assert rate >= zf.secrecy_rate - 1e-3
        assert abs(rate - zf.secrecy_rate) <= 1e-3


def test_fast_path_branches():
    net = NetworkInstance(1, 1, [1.0], [2.0], [[1.0]], 1.0, [2.0], 1.0)
    # D_T = 1.25; C(eta) = 0.25/eta + 0.75 crosses it at eta = 0.5
    lo = single_eav_fast_path(net, 0.3)
    assert lo.diagnostics["branch"] == "leakage_only"
    hi = single_eav_fast_path(net, 5.0)
    assert hi.diagnostics["branch"] == "both_constraints"
    for eta, sol in ((0.3, lo), (5.0, hi)):
        ref = inner_solve(net, eta, "sum")
        assert_allclose(sol.snr_d, ref.snr_d, rtol=1e-7)
    with pytest.raises(ValueError, match="one eavesdropper"):
        single_eav_fast_path(_degraded(np.random.default_rng(1), 2, 2), 0.3)
    with pytest.raises(ValueError, match="sum"):
        single_eav_fast_path(net, 0.3, mode="individual")


def test_fast_path_multi_relay_agrees():
    rng = np.random.default_rng(79)
    net = _degraded(rng, 3, 1)
    eta = 0.4 * eta_upper_bound(net, "sum")
    sol = single_eav_fast_path(net, eta)
    ref = inner_solve(net, eta, "sum")
    assert_allclose(sol.snr_d, ref.snr_d, rtol=1e-7)


def test_solve_single_relay_vs_grid():
    """m=1 collapses both power modes to a scalar box; a dense beta grid
    bounds the reachable rate."""
    rng = np.random.default_rng(80)
    net = _degraded(rng, 1, 1)
    bmax = float(compute_beta_max(net)[0])
    bs = np.linspace(0.0, bmax, 20001)
    a_d = float(net.h_s[0] * net.h_d[0])
    a_e = float(net.h_s[0] * net.h_e[0, 0])
    snr_d = net.gamma_s * (a_d * bs) ** 2 / (1.0 + (bs * net.h_d[0]) ** 2)
    snr_e = net.gamma_s * (a_e * bs) ** 2 / (1.0 + (bs * net.h_e[0, 0]) ** 2)
    grid_best = float(np.max(0.5 * np.log2((1.0 + snr_d) / (1.0 + snr_e))))
    for mode in ("sum", "individual"):
        res = solve_iterative(net, mode)
        assert abs(res.secrecy_rate - grid_best) <= 1e-4


def test_solve_ordering_reference_configuration():
    from afsec.experiments import gen_network
    for seed in (3, 11):
        net = gen_network(5, 3, seed)
        r_sum = solve_iterative(net, "sum").secrecy_rate
        r_ind = solve_iterative(net, "individual").secrecy_rate
        r_zf = solve_zero_forcing(net).secrecy_rate
        assert r_sum + 1e-6 >= r_ind
        assert r_ind + 1e-6 >= r_zf


def test_solve_search_contract():
    from afsec.numerics import iteration_bound
    rng = np.random.default_rng(81)
    net = _degraded(rng, 3, 2)
    res = solve_iterative(net, "individual")
    d = res.diagnostics
    assert d["eta_lo"] == pytest.approx(1e-6 * d["eta_max"])
    assert d["eta_lo"] > 0
    assert d["iterations"] <= iteration_bound(d["eta_max"] - d["eta_lo"], d["delta"]) + 2
    assert d["eta_lo"] <= d["eta_best"] <= d["eta_max"]
    hist = np.asarray(d["history"])
    assert np.all(np.isfinite(hist))
    assert abs(res.secrecy_rate - d["rate_star"]) <= 1e-6
    custom = solve_iterative(net, "individual", delta=1e-3 * d["eta_max"])
    assert custom.diagnostics["delta"] == pytest.approx(1e-3 * d["eta_max"])


def test_solve_rejects_no_eavesdropper():
    net = NetworkInstance(2, 0, [1.0, 1.0], [1.0, 1.0], [], 1.0, [1.0, 1.0], 1.0)
    with pytest.raises(ValueError, match="no eavesdroppers"):
        solve_iterative(net, "sum")


def test_sum_mode_dominates_individual():
    rng = np.random.default_rng(82)
    for _ in range(4):
        net = _degraded(rng, int(rng.integers(2, 5)), int(rng.integers(1, 3)))
        r_sum = solve_iterative(net, "sum").secrecy_rate
        r_ind = solve_iterative(net, "individual").secrecy_rate
        assert r_sum + 1e-6 >= r_ind


def test_objective_sign_symmetry():
    rng = np.random.default_rng(83)
    net = _degraded(rng, 3, 1)
    flipped = NetworkInstance(3, 1, -net.h_s, net.h_d, net.h_e,
                              net.p_s, net.p_r, net.sigma2)
    a = solve_iterative(net, "sum").secrecy_rate
    b = solve_iterative(flipped, "sum").secrecy_rate
    assert_allclose(a, b, rtol=1e-10)


def test_profile_single_peak():
    rng = np.random.default_rng(84)
    for _ in range(4):
        net = _degraded(rng, int(rng.integers(2, 5)), int(rng.integers(1, 3)))
        mode = ("sum", "individual")[int(rng.integers(2))]
        _, vals = eta_profile(net, mode, num=64)
        assert count_strict_local_maxima(vals) == 1


def test_count_maxima_unit_cases():
    assert count_strict_local_maxima([0.0, 1.0, 0.0]) == 1
    assert count_strict_local_maxima([0.0, 1.0, 0.0, 1.0, 0.0]) == 2
    assert count_strict_local_maxima([1.0, 1.0 + 1e-12, 1.0]) == 0
    assert count_strict_local_maxima([0.0, 1.0, 1.0 + 1e-12, 0.0]) == 1
    assert count_strict_local_maxima(np.linspace(0, 1, 16)) == 1
