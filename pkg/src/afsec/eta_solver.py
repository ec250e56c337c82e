"""General solver: cap the worst eavesdropper SNR and search the cap level.

For a cap eta on every eavesdropper SNR, the inner problem becomes convex
after two substitutions: omega_i = h_d[i] beta_i and v = omega /
sqrt(1 + |omega|^2) (inverse omega = v / sqrt(1 - |v|^2)).  In v the
destination SNR is exactly (g.v)^2 with g_i = sqrt(p_s/sigma2) h_s[i], each
eavesdropper cap is a centered ellipsoid

    v . C_j(eta) v <= 1,
    C_j(eta) = (p_s/sigma2) a_j a_j^T / eta + I - diag(rho_j^2),
    a_j = h_s * rho_j,   rho_j = h_e[j] / h_d,

positive definite whenever |rho_j| < 1 entrywise (the degraded regime), and
the power budget is one more ellipsoid: diag(1 + 1/(h_d^2 beta_tot)) for a
total budget beta_tot = sum beta_max^2 ("sum" mode) or, per relay,
I + e_i e_i^T/(h_d[i]^2 beta_max[i]^2) ("individual" mode).  The outer
scalar search maximizes (1 + snr_d(eta))/(1 + eta) over a bracketed eta by
golden section; the bracket top is a closed-form bound on the reachable
eavesdropper SNR.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import NotDegradedError
from .network import compute_beta_max, secrecy_rate, validate
from .numerics import (
    GoldenSectionConfig,
    QcqpProblem,
    golden_section_max,
    rayleigh_direction,
    solve_linear_qcqp,
)

MODES = ("sum", "individual")


def transform_to_v(omega):
    """Map amplification coordinates into the open unit ball."""
    omega = np.asarray(omega, dtype=float)
    return omega / np.sqrt(1.0 + float(omega @ omega))


def transform_to_omega(v):
    """Inverse of :func:`transform_to_v`; requires |v| < 1."""
    v = np.asarray(v, dtype=float)
    nsq = float(v @ v)
    if nsq >= 1.0:
        raise ValueError("v must lie strictly inside the unit ball")
    return v / np.sqrt(1.0 - nsq)


@dataclass(frozen=True)
class EtaProblem:
    """Instance data in the v coordinates."""

    g: np.ndarray  # sqrt(p_s/sigma2) * h_s, the linear objective vector
    rho: np.ndarray  # (k, m) eavesdropper-to-destination gain ratios
    h_d: np.ndarray
    beta_max: np.ndarray
    beta_tot: float  # sum of squared per-relay bounds
    gamma: float
    mode: str

    @classmethod
    def from_network(cls, net, mode):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        report = validate(net)
        if not report.ok:
            raise ValueError("; ".join(report.errors))
        rho = net.h_e / net.h_d[None, :] if net.k else np.zeros((0, net.m))
        if net.k and np.any(np.abs(rho) >= 1.0):
            raise NotDegradedError(
                "some |h_e| >= |h_d|: leakage-cap ellipsoids lose positive definiteness"
            )
        bmax = compute_beta_max(net)
        return cls(
            g=np.sqrt(net.gamma_s) * net.h_s,
            rho=rho,
            h_d=net.h_d.copy(),
            beta_max=bmax,
            beta_tot=float(np.sum(bmax**2)),
            gamma=net.gamma_s,
            mode=mode,
        )


def eta_upper_bound(net, mode):
    """Largest eavesdropper SNR reachable under the power budget.

    For eavesdropper j with composite gains a_j = h_s * h_e[j],

        eta_j = (p_s/sigma2) * a_j . Dtilde_j^-1 a_j,
        Dtilde_j = diag(1/beta_tot + h_e[j]^2),

    and the bound is the maximum over j.  The individual mode uses the same
    beta_tot = sum beta_max^2 (its box sits inside that ball, so the bound
    stays valid, merely looser).
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if net.k == 0:
        raise ValueError("no eavesdroppers: the cap search does not apply")
    bmax = compute_beta_max(net)
    beta_tot = float(np.sum(bmax**2))
    best = 0.0
    for j in range(net.k):
        a = net.h_s * net.h_e[j]
        dtilde = 1.0 / beta_tot + net.h_e[j] ** 2
        best = max(best, float(np.sum(a**2 / dtilde)))
    return net.gamma_s * best


def build_inner_problem(net, eta, mode):
    """Assemble the capped-leakage convex program as a :class:`QcqpProblem`.

    Constraints: one ellipsoid per eavesdropper, then the power budget (one
    matrix in sum mode, one per relay in individual mode).
    """
    prob = EtaProblem.from_network(net, mode)
    if eta <= 0:
        raise ValueError("eta must be positive")
    mats = []
    for j in range(net.k):
        a = net.h_s * prob.rho[j]
        mats.append(prob.gamma * np.outer(a, a) / eta + np.diag(1.0 - prob.rho[j] ** 2))
    if mode == "sum":
        mats.append(np.diag(1.0 + 1.0 / (prob.h_d**2 * prob.beta_tot)))
    else:
        for i in range(net.m):
            D = np.eye(net.m)
            D[i, i] += 1.0 / (prob.h_d[i] ** 2 * prob.beta_max[i] ** 2)
            mats.append(D)
    return QcqpProblem(c=prob.g, constraints=tuple(mats))


@dataclass(frozen=True)
class InnerSolution:
    """Solution of the capped-leakage inner problem at one eta."""

    v: np.ndarray
    omega: np.ndarray
    beta: np.ndarray
    snr_d: float
    objective: float
    diagnostics: dict = field(default_factory=dict)


def _package_inner(net, qcqp_sol, extra=None):
    v = qcqp_sol.v
    omega = transform_to_omega(v)
    beta = omega / net.h_d
    g = np.sqrt(net.gamma_s) * net.h_s
    diag = {"newton_steps": qcqp_sol.newton_steps, "outer_steps": qcqp_sol.outer_steps}
    if extra:
        diag.update(extra)
    return InnerSolution(
        v=v,
        omega=omega,
        beta=beta,
        snr_d=float(g @ v) ** 2,
        objective=qcqp_sol.objective,
        diagnostics=diag,
    )


def inner_solve(net, eta, mode):
    """Barrier solve of the inner problem; returns an :class:`InnerSolution`.

    The returned beta satisfies the mode's power constraint strictly and
    every eavesdropper SNR stays at or below eta (interior-point iterates
    never touch the ellipsoid boundaries).
    """
    problem = build_inner_problem(net, eta, mode)
    return _package_inner(net, solve_linear_qcqp(problem))


def single_eav_fast_path(net, eta, mode="sum"):
    """Single-eavesdropper shortcut in sum mode.

    If the power ellipsoid is slack everywhere inside the leakage ellipsoid
    (largest power eigenvalue below the smallest leakage eigenvalue) the
    optimum is the closed-form ellipsoid-aligned direction; otherwise both
    constraints are kept and the barrier solver runs.  Either branch matches
    :func:`inner_solve`, the diagnostics record which branch was taken.
    """
    if net.k != 1:
        raise ValueError("fast path needs exactly one eavesdropper")
    if mode != "sum":
        raise ValueError("fast path is defined for the sum power mode")
    problem = build_inner_problem(net, eta, mode)
    C, D_T = problem.constraints
    lam_power_max = float(np.max(np.diag(D_T)))
    lam_leak_min = float(np.linalg.eigvalsh(C)[0])
    if lam_power_max < lam_leak_min:
        g = problem.c
        v, value = rayleigh_direction(g, C)
        if float(g @ v) < 0:
            v = -v
        omega = transform_to_omega(v)
        beta = omega / net.h_d
        return InnerSolution(
            v=v,
            omega=omega,
            beta=beta,
            snr_d=value,
            objective=float(g @ v),
            diagnostics={"branch": "leakage_only"},
        )
    sol = solve_linear_qcqp(problem)
    return _package_inner(net, sol, extra={"branch": "both_constraints"})


def solve_iterative(net, mode, delta=None):
    """Golden-section search over the leakage cap eta.

    The bracket is [1e-6, 1] times the closed-form cap bound; ``delta``
    defaults to 1e-4 times the bound.  Every evaluation solves the inner
    convex program, and the returned amplification vector is the one from
    the best sampled cap, whose realized rate matches the best sampled
    objective (1/2) log2((1 + snr_d)/(1 + eta)).
    """
    prob = EtaProblem.from_network(net, mode)
    if net.k == 0:
        raise ValueError("no eavesdroppers: maximize the destination SNR directly")
    eta_max = eta_upper_bound(net, mode)
    eta_lo = 1e-6 * eta_max
    if delta is None:
        delta = 1e-4 * eta_max
    cfg = GoldenSectionConfig(eta_lo=eta_lo, eta_hi=eta_max, delta=delta)
    cache = {}

    def f(eta):
        sol = inner_solve(net, eta, mode)
        cache[eta] = sol
        return (1.0 + sol.snr_d) / (1.0 + eta)

    result = golden_section_max(f, cfg)
    eta_best, f_best = max(result.history, key=lambda t: t[1])
    sol = cache[eta_best]
    if mode == "sum":
        bounds = np.full(net.m, np.sqrt(prob.beta_tot))
    else:
        bounds = prob.beta_max
    diag = {
        "mode": mode,
        "eta_star": result.eta_star,
        "eta_best": eta_best,
        "eta_max": eta_max,
        "eta_lo": eta_lo,
        "delta": delta,
        "rate_star": 0.5 * np.log2(f_best),
        "iterations": result.iterations,
        "history": [(float(e), float(v)) for e, v in result.history],
    }
    method = "sum_iterative" if mode == "sum" else "individual_iterative"
    return secrecy_rate(net, sol.beta, method=method, diagnostics=diag, beta_max=bounds)


def eta_profile(net, mode, num=64):
    """Sample the outer objective at log-spaced caps; useful for diagnosing
    the search landscape.  Returns (etas, values)."""
    eta_max = eta_upper_bound(net, mode)
    etas = np.geomspace(1e-6 * eta_max, eta_max, num)
    vals = np.empty(num)
    for i, eta in enumerate(etas):
        sol = inner_solve(net, eta, mode)
        vals[i] = (1.0 + sol.snr_d) / (1.0 + eta)
    return etas, vals


def count_strict_local_maxima(values, tol=1e-9):
    """Count strict local maxima of a sampled profile, merging plateaus.

    Consecutive samples within ``tol`` of each other form one segment; a
    segment counts when it sits above both neighbors by more than ``tol``
    (boundary segments compare against their single neighbor).
    """
    values = np.asarray(values, dtype=float)
    segments = [values[0]]
    for v in values[1:]:
        if abs(v - segments[-1]) <= tol:
            continue
        segments.append(v)
    if len(segments) == 1:
        return 0
    count = 0
    for i, v in enumerate(segments):
        left_ok = i == 0 or v > segments[i - 1] + tol
        right_ok = i == len(segments) - 1 or v > segments[i + 1] + tol
        if left_ok and right_ok:
            count += 1
    return count
