"""Solver for the scaled-eavesdropper case h_e = alpha * h_d, 0 < alpha < 1.

Substituting omega_i = h_d[i] beta_i and g_i = sqrt(p_s/sigma2) h_s[i] turns
the rate into a function of the coherent gain g.omega and the radius
|omega| alone, so for a fixed radius the best direction is g/|g| and the
radius optimum has the closed form r* = 1/sqrt(alpha sqrt(1 + |g|^2)).

When the direction-scaled point violates per-relay bounds, the relays whose
bounds activate first are exactly the leading ones in decreasing order of
g_i/omega_max_i.  Clamping a prefix of size m to its bounds and scaling the
remaining coordinates proportionally to the source gains reduces the search
to the scalar suffix factor, whose stationary condition is a monic quartic
with exactly one positive root.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotScaledChannelError
from .network import compute_beta_max, secrecy_rate, validate
from .numerics import QuarticCoeffs, positive_quartic_root


@dataclass(frozen=True)
class ScaledProblem:
    """Normalized data of a scaled-eavesdropper instance.

    ``g_s`` is the source gain vector scaled by sqrt(p_s/sigma2); the
    module's closed forms assume its entries non-negative (``solve_scaled``
    handles signs by flipping coordinates).  ``omega_max[i] =
    |h_d[i]| beta_max[i]`` are the bounds in the omega variables.
    """

    g_s: np.ndarray
    omega_max: np.ndarray
    alpha: float
    gamma_s: float

    def __post_init__(self):
        g = np.array(self.g_s, dtype=float)
        w = np.array(self.omega_max, dtype=float)
        g.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "g_s", g)
        object.__setattr__(self, "omega_max", w)
        if g.shape != w.shape or g.ndim != 1:
            raise ValueError("g_s and omega_max must be vectors of equal length")
        if not np.all(w > 0):
            raise ValueError("every omega_max entry must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")

    @classmethod
    def from_network(cls, net, alpha):
        """Build from a single-eavesdropper network after checking the scaling.

        The eavesdropper row must equal alpha * h_d entrywise to 1e-9
        relative accuracy; anything else raises
        :class:`NotScaledChannelError` (use the general iterative solver).
        """
        report = validate(net)
        if not report.ok:
            raise ValueError("; ".join(report.errors))
        if net.k != 1:
            raise NotScaledChannelError(f"expected exactly one eavesdropper row, got {net.k}")
        if not 0.0 < alpha < 1.0:
            raise NotScaledChannelError(f"alpha must lie in (0, 1), got {alpha}")
        target = alpha * net.h_d
        err = np.max(np.abs(net.h_e[0] - target))
        if err > 1e-9 * max(1.0, float(np.max(np.abs(target)))):
            raise NotScaledChannelError(
                f"h_e deviates from alpha*h_d by {err:.3e}; not a scaled channel"
            )
        gamma = net.gamma_s
        g = np.sqrt(gamma) * net.h_s
        omega_max = np.abs(net.h_d) * compute_beta_max(net)
        return cls(g_s=g, omega_max=omega_max, alpha=float(alpha), gamma_s=gamma)


def unconstrained_solution(prob):
    """Bound-free optimum: direction g/|g| at radius 1/sqrt(alpha sqrt(1+|g|^2)).

    Returns ``(omega_star, r_star)``.  The coherent power at the optimum is
    |g|^2 r*^2.
    """
    norm = float(np.linalg.norm(prob.g_s))
    if norm == 0.0:
        raise ValueError("source gain vector is zero; the rate is identically zero")
    r_star = 1.0 / np.sqrt(prob.alpha * np.sqrt(1.0 + norm**2))
    return prob.g_s / norm * r_star, r_star


@dataclass(frozen=True)
class OrderedPrefix:
    """Relays sorted by decreasing g_i/omega_max_i with running sums.

    For the 1-indexed prefix size m: ``p[m-1] = sum_{i<=m} g_(i)
    omega_max_(i)``, ``q[m-1] = sum_{i<=m} omega_max_(i)^2`` and ``s[m-1] =
    sum_{i>m} g_(i)^2`` (so ``s[-1] = 0``).  ``order`` maps sorted position
    to original relay index; ties are broken by ascending original index.
    """

    order: np.ndarray
    g: np.ndarray
    omega_max: np.ndarray
    p: np.ndarray
    q: np.ndarray
    s: np.ndarray


def order_relays(prob):
    ratios = prob.g_s / prob.omega_max
    order = np.argsort(-ratios, kind="stable")
    g = prob.g_s[order]
    w = prob.omega_max[order]
    p = np.cumsum(g * w)
    q = np.cumsum(w**2)
    total = float(np.sum(g**2))
    s = total - np.cumsum(g**2)
    s[-1] = 0.0  # exact zero instead of cancellation residue
    return OrderedPrefix(order=order, g=g, omega_max=w, p=p, q=q, s=s)


def boundary_radii(op):
    """Radii at which each ordered relay's bound activates.

    r_m = sqrt(s_m/g_(m)^2 * omega_max_(m)^2 + q_m) for m < M and
    r_M = sqrt(q_M).  A relay with zero source gain never activates through
    radius growth; its radius is +inf.
    """
    g2 = op.g**2
    lead = np.empty_like(op.s)
    np.divide(op.s * op.omega_max**2, g2, out=lead, where=g2 > 0)
    lead[g2 == 0] = np.inf
    lead[-1] = 0.0
    return np.sqrt(lead + op.q)


def lambda_root(p, q, s, alpha, gamma_s):
    """Optimal suffix scale for a prefix clamped at its bounds.

    Convention: ``p`` and ``s`` are plain-channel sums (p = sum_prefix
    h_s,(i) omega_max,(i), s = sum_suffix h_s,(i)^2) with the source SNR
    ``gamma_s`` explicit, and the suffix coordinates are lambda * h_s,(i).
    Equivalently, pass the sqrt(gamma_s)-scaled sums with gamma_s = 1.

    The stationary condition of the suffix-scale objective is the monic
    quartic below; its coefficients change sign exactly once, so the unique
    positive root is the maximizer.
    """
    if s <= 0:
        raise ValueError("need a non-empty suffix (s > 0)")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if p < 0 or q < 0 or gamma_s < 0:
        raise ValueError("p, q and gamma_s must be non-negative")
    gs = gamma_s * s
    a2 = alpha**2
    denom = s * (1.0 + gs)
    coeffs = QuarticCoeffs(
        c3=p * (2.0 + 3.0 * gs) / denom,
        c2=3.0 * p**2 * gamma_s / denom,
        c1=p * (gamma_s * p**2 * a2 + 2.0 * q * a2 + a2 + 1.0) / (s * a2 * denom),
        c0=-(1.0 + q) * (1.0 + a2 * q) / (s * a2 * denom),
    )
    return positive_quartic_root(coeffs)


def solve_scaled(net, alpha):
    """Exact solution of the scaled-eavesdropper instance.

    Starts from the bound-free optimum and, while the next relay in
    activation order exceeds its bound, grows the clamped prefix, rescaling
    the remaining coordinates by the quartic root.  The bound-active set of
    the result is always a prefix of the activation order.
    """
    prob = ScaledProblem.from_network(net, alpha)
    gamma = prob.gamma_s
    signs = np.where(prob.g_s >= 0, 1.0, -1.0)
    flipped = ScaledProblem(
        g_s=np.abs(prob.g_s), omega_max=prob.omega_max, alpha=prob.alpha, gamma_s=gamma
    )
    beta_max = compute_beta_max(net)
    diag = {"alpha": prob.alpha}
    if not np.any(flipped.g_s > 0):
        diag["prefix_size"] = 0
        return secrecy_rate(
            net, np.zeros(net.m), method="scaled_alpha", diagnostics=diag, beta_max=beta_max
        )

    omega0, r_star = unconstrained_solution(flipped)
    diag["r_star"] = r_star
    op = order_relays(flipped)
    diag["order"] = op.order.tolist()

    m_relays = net.m
    feastol = 1.0 + 1e-12
    if np.all(omega0 <= flipped.omega_max * feastol):
        omega_abs = np.minimum(omega0, flipped.omega_max)
        diag["prefix_size"] = 0
        diag["suffix_scale"] = None
    else:
        sqrt_gamma = np.sqrt(gamma)
        h_ord = op.g / sqrt_gamma  # plain-channel gains in activation order
        omega_sorted = None
        for m in range(1, m_relays + 1):
            if m == m_relays:
                omega_sorted = op.omega_max.copy()
                diag["prefix_size"] = m_relays
                diag["suffix_scale"] = None
                break
            if op.s[m - 1] == 0.0:
                # remaining relays carry no source signal: best suffix is zero
                omega_sorted = np.concatenate([op.omega_max[:m], np.zeros(m_relays - m)])
                diag["prefix_size"] = m
                diag["suffix_scale"] = 0.0
                break
            lam = lambda_root(
                op.p[m - 1] / sqrt_gamma, op.q[m - 1], op.s[m - 1] / gamma, prob.alpha, gamma
            )
            suffix = lam * h_ord[m:]
            if suffix[0] <= op.omega_max[m] * feastol:
                omega_sorted = np.concatenate([op.omega_max[:m], np.minimum(suffix, op.omega_max[m:])])
                diag["prefix_size"] = m
                diag["suffix_scale"] = lam
                break
        omega_abs = np.empty(m_relays)
        omega_abs[op.order] = omega_sorted
    beta = signs * omega_abs / net.h_d
    return secrecy_rate(net, beta, method="scaled_alpha", diagnostics=diag, beta_max=beta_max)
