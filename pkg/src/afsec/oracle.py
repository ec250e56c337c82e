"""Brute-force references: exhaustive grids and multistart gradient ascent.

These searchers evaluate the exact secrecy rate directly in the beta
coordinates and know nothing about the structured solvers, which makes them
slow but trustworthy cross-checks.
"""

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .network import compute_beta_max, secrecy_rate

_CHUNK = 1 << 20
_LOG2X2 = 2.0 * np.log(2.0)


@dataclass(frozen=True)
class OracleConfig:
    """Knobs for the reference searchers.

    ``mode`` selects the power constraint: "individual" searches the
    per-relay box, "sum" the ball of radius sqrt(sum beta_max^2).
    ``resolution`` (grid points per dimension) must be odd so that beta = 0
    lies on the grid.  ``max_iter`` caps the ascent iterations per start.
    """

    mode: str = "individual"
    resolution: int = 41
    n_starts: int = 100
    max_iter: int = 3000
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("individual", "sum"):
            raise ValueError(f"mode must be 'individual' or 'sum', got {self.mode!r}")
        if self.resolution < 3 or self.resolution % 2 == 0:
            raise ValueError("resolution must be odd and at least 3")


class _LinkBatch:
    """Channel tensors for evaluating many beta vectors at once.

    Rows of ``B`` are amplification vectors.  The gradient of a link SNR
    gam (a.b)^2 / (1 + b.Db) with D = diag(h^2) is

        gam [2 (a.b) a (1 + b.Db) - (a.b)^2 2 Db] / (1 + b.Db)^2.
    """

    def __init__(self, net):
        self.gam = net.gamma_s
        self.a_d = net.h_s * net.h_d
        self.hd2 = net.h_d**2
        self.a_e = net.h_s[None, :] * net.h_e if net.k else np.zeros((0, net.m))
        self.he2 = net.h_e**2
        self.k = net.k

    def rates(self, B):
        """Secrecy rates (bits) for each row of B."""
        snr_d = self.gam * (B @ self.a_d) ** 2 / (1.0 + B**2 @ self.hd2)
        if self.k:
            snre = self.gam * (B @ self.a_e.T) ** 2 / (1.0 + B**2 @ self.he2.T)
            worst = snre.max(axis=1)
        else:
            worst = 0.0
        return 0.5 * np.log2(1.0 + snr_d) - 0.5 * np.log2(1.0 + worst)

    def links(self, B):
        """Per-link SNRs and SNR gradients for each row of B.

        Returns snr_d (n,), grad_d (n, m), snr_e (n, k), grad_e (n, k, m).
        """
        ab = B @ self.a_d
        den = 1.0 + B**2 @ self.hd2
        snr_d = self.gam * ab**2 / den
        grad_d = self.gam * (
            2.0 * ab[:, None] * self.a_d[None, :] * den[:, None]
            - ab[:, None] ** 2 * 2.0 * self.hd2[None, :] * B
        ) / den[:, None] ** 2
        abe = B @ self.a_e.T
        dene = 1.0 + B**2 @ self.he2.T
        snre = self.gam * abe**2 / dene
        grad_e = self.gam * (
            2.0 * abe[..., None] * self.a_e[None, ...] * dene[..., None]
            - abe[..., None] ** 2 * 2.0 * self.he2[None, ...] * B[:, None, :]
        ) / dene[..., None] ** 2
        return snr_d, grad_d, snre, grad_e

    def branches(self, B):
        """Objective branches f_j = r_d - r_{e,j} (bits) and their gradients.

        The secrecy rate is min_j f_j.  Returns fvals (n, k), rows (n, k, m).
        """
        snr_d, grad_d, snre, grad_e = self.links(B)
        rd = 0.5 * np.log2(1.0 + snr_d)
        base = grad_d / (1.0 + snr_d)[:, None]
        fvals = rd[:, None] - 0.5 * np.log2(1.0 + snre)
        rows = (base[:, None, :] - grad_e / (1.0 + snre)[..., None]) / _LOG2X2
        return fvals, rows


def _mode_bounds(net, mode):
    bmax = compute_beta_max(net)
    if mode == "individual":
        return bmax, bmax
    radius = float(np.sqrt(np.sum(bmax**2)))
    return np.full(net.m, radius), bmax


def grid_search(net, config=None):
    """Exhaustive search over a symmetric grid; exact up to grid resolution.

    Memory-safe for resolution^m up to about 10^8 through chunked
    evaluation, but refuses m > 4 outright.  In sum mode, grid points
    outside the power ball are skipped.  Ties resolve to the first point in
    row-major order, so results are deterministic.
    """
    config = config or OracleConfig()
    if net.m > 4:
        raise ValueError(f"grid search supports at most 4 relays, got {net.m}")
    box, bmax = _mode_bounds(net, config.mode)
    res = config.resolution
    axes = [np.linspace(-box[i], box[i], res) for i in range(net.m)]
    total = res**net.m
    radius2 = float(np.sum(bmax**2))
    links = _LinkBatch(net)
    best_rate = -np.inf
    best_beta = np.zeros(net.m)
    evaluated = 0
    for lo in range(0, total, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, total))
        multi = np.unravel_index(idx, (res,) * net.m)
        B = np.column_stack([axes[d][multi[d]] for d in range(net.m)])
        if config.mode == "sum":
            keep = (B**2).sum(axis=1) <= radius2 * (1.0 + 1e-12)
            B = B[keep]
            if B.shape[0] == 0:
                continue
        rates = links.rates(B)
        evaluated += B.shape[0]
        j = int(np.argmax(rates))
        if rates[j] > best_rate:
            best_rate = float(rates[j])
            best_beta = B[j].copy()
    diag = {"resolution": res, "points": evaluated, "mode": config.mode}
    return secrecy_rate(net, best_beta, method="oracle_grid", diagnostics=diag, beta_max=box)


def rate_and_gradient(net, beta):
    """Exact secrecy rate and its analytic gradient at ``beta``.

    The rate gradient combines the destination link with the currently
    worst eavesdropper; when several eavesdroppers tie for the maximum
    within 1e-9 relative, their gradients are averaged (a valid
    subgradient choice under ties).
    """
    beta = np.asarray(beta, dtype=float)
    links = _LinkBatch(net)
    snr_d, grad_d, snre, grad_e = links.links(beta[None, :])
    snr_d = float(snr_d[0])
    rate = 0.5 * np.log2(1.0 + snr_d)
    grad = grad_d[0] / (1.0 + snr_d)
    if net.k:
        vals = snre[0]
        worst = float(vals.max())
        active = vals >= worst - 1e-9 * (1.0 + worst)
        grad_worst = grad_e[0][active].mean(axis=0)
        rate -= 0.5 * np.log2(1.0 + worst)
        grad = grad - grad_worst / (1.0 + worst)
    return rate, grad / _LOG2X2


def _min_norm_convex(rows):
    """Minimum-norm point of the convex hull of the given vectors.

    Exact enumeration over faces (Caratheodory makes this finite); fine
    for the handful of tied eavesdroppers the searchers ever see.  The
    result is the steepest ascent direction for a min of smooth branches,
    where a plain average of active gradients can fail to ascend.
    """
    rows = np.asarray(rows, dtype=float)
    n = rows.shape[0]
    if n == 1:
        return rows[0].copy()
    best = rows[0]
    best_norm = float(rows[0] @ rows[0])
    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        sub = rows[idx]
        k = len(idx)
        # KKT system for min ||w @ sub||^2 subject to sum(w) = 1
        kkt = np.zeros((k + 1, k + 1))
        kkt[:k, :k] = sub @ sub.T
        kkt[:k, k] = 1.0
        kkt[k, :k] = 1.0
        right = np.zeros(k + 1)
        right[k] = 1.0
        try:
            sol = np.linalg.solve(kkt, right)
        except np.linalg.LinAlgError:
            sol = np.linalg.lstsq(kkt, right, rcond=None)[0]
        w = sol[:k]
        if np.any(w < -1e-12):
            continue
        p = w @ sub
        norm = float(p @ p)
        if norm < best_norm:
            best_norm = norm
            best = p
    return best


def _segment_min_norm(a, b):
    """Min-norm points on segments [a_i, b_i], batched over rows."""
    ba = b - a
    denom = np.einsum("ij,ij->i", ba, ba)
    safe = np.where(denom > 0.0, denom, 1.0)
    t = np.clip(-np.einsum("ij,ij->i", a, ba) / safe, 0.0, 1.0)
    t = np.where(denom > 0.0, t, 0.0)
    return a + t[:, None] * ba


def _min_norm3(rows):
    """Batched min-norm point of conv{r1, r2, r3} for rows (n, 3, m).

    Enumerates the seven faces of the simplex: three vertices, three
    edges (closed form), and the interior (batched KKT solve with a tiny
    ridge so degenerate triples stay solvable).
    """
    n, _, m = rows.shape
    cands = np.empty((n, 7, m))
    cands[:, 0] = rows[:, 0]
    cands[:, 1] = rows[:, 1]
    cands[:, 2] = rows[:, 2]
    cands[:, 3] = _segment_min_norm(rows[:, 0], rows[:, 1])
    cands[:, 4] = _segment_min_norm(rows[:, 0], rows[:, 2])
    cands[:, 5] = _segment_min_norm(rows[:, 1], rows[:, 2])
    gram = np.einsum("nim,njm->nij", rows, rows)
    ridge = 1e-13 * np.trace(gram, axis1=1, axis2=2)[:, None, None] * np.eye(3)[None]
    kkt = np.zeros((n, 4, 4))
    kkt[:, :3, :3] = gram + ridge
    kkt[:, :3, 3] = 1.0
    kkt[:, 3, :3] = 1.0
    right = np.zeros((n, 4, 1))
    right[:, 3, 0] = 1.0
    try:
        w = np.linalg.solve(kkt, right)[:, :3, 0]
    except np.linalg.LinAlgError:
        w = np.full((n, 3), np.inf)
    interior = np.einsum("ni,nim->nm", w, rows)
    bad = np.any(w < -1e-12, axis=1) | ~np.all(np.isfinite(interior), axis=1)
    interior[bad] = rows[bad, 0]
    cands[:, 6] = interior
    norms = np.einsum("ncm,ncm->nc", cands, cands)
    pick = np.argmin(norms, axis=1)
    return np.take_along_axis(cands, pick[:, None, None], axis=1)[:, 0, :]


def _direction_batch(fvals, rows, stepi, k):
    """Ascent direction per row from branch values and branch gradients.

    Branches whose separation from the minimum could be bridged within the
    current step count as tied; the direction is the min-norm point of the
    tied gradients (steepest ascent for a min of smooth branches).
    """
    jmin = np.argmin(fvals, axis=1)
    rmin = np.take_along_axis(rows, jmin[:, None, None], axis=1)[:, 0, :]
    sep = fvals - np.take_along_axis(fvals, jmin[:, None], axis=1)
    dist = np.linalg.norm(rows - rmin[:, None, :], axis=2)
    active = sep <= stepi[:, None] * dist + 1e-15
    count = active.sum(axis=1)
    D = rmin.copy()
    two = count == 2
    if np.any(two):
        other = np.argmax(active[two] & (np.arange(k)[None, :] != jmin[two, None]), axis=1)
        D[two] = _segment_min_norm(rmin[two], rows[two, other])
    three = count == 3
    if np.any(three):
        idx3 = np.argsort(~active[three], axis=1)[:, :3]
        D[three] = _min_norm3(np.take_along_axis(rows[three], idx3[:, :, None], axis=1))
    for i in np.flatnonzero(count > 3):
        D[i] = _min_norm_convex(rows[i][active[i]])
    return D


def _project_batch(B, box, radius2, mode):
    C = np.clip(B, -box, box)
    if mode == "sum":
        nsq = np.einsum("ij,ij->i", C, C)
        over = nsq > radius2
        if np.any(over):
            C[over] *= np.sqrt(radius2 / nsq[over])[:, None]
    return C


def _project(beta, box, radius2, mode):
    return _project_batch(np.atleast_2d(np.asarray(beta, dtype=float)), box, radius2, mode)[0]


def _polish(links, beta0, box, radius2, mode):
    """Refine one terminal point with an SQP solve of the epigraph form.

    The min over eavesdropper branches becomes max t subject to
    f_j(beta) >= t, so the kink and the power bounds turn into ordinary
    smooth constraints and the quadratic model can move along them where
    a projected subgradient step stalls.  Returns the refined point,
    projected back into the feasible set, together with its exact rate;
    on any solver failure the input point comes back unchanged.
    """
    m = box.size
    cons = []
    if links.k:
        def c_branch(z):
            fvals, _ = links.branches(z[None, :m])
            return fvals[0] - z[m]

        def j_branch(z):
            _, rows = links.branches(z[None, :m])
            return np.column_stack([rows[0], -np.ones(links.k)])

        cons.append({"type": "ineq", "fun": c_branch, "jac": j_branch})
        grad_obj = np.zeros(m + 1)
        grad_obj[m] = -1.0
        fun = lambda z: -z[m]
        jac = lambda z: grad_obj
        fvals0, _ = links.branches(beta0[None, :])
        x0 = np.append(beta0, fvals0[0].min())
        bounds = [(-b, b) for b in box] + [(None, None)]
    else:
        def fun(z):
            return -links.rates(z[None, :])[0]

        def jac(z):
            snr_d, grad_d, _, _ = links.links(z[None, :])
            return -grad_d[0] / (1.0 + snr_d[0]) / _LOG2X2

        x0 = beta0.copy()
        bounds = [(-b, b) for b in box]
    if mode == "sum":
        nvar = len(bounds)

        def c_ball(z):
            return radius2 - float(z[:m] @ z[:m])

        def j_ball(z):
            g = np.zeros(nvar)
            g[:m] = -2.0 * z[:m]
            return g

        cons.append({"type": "ineq", "fun": c_ball, "jac": j_ball})
    res = scipy.optimize.minimize(
        fun, x0, jac=jac, bounds=bounds, constraints=cons,
        method="SLSQP", options={"maxiter": 200, "ftol": 1e-12},
    )
    if not np.all(np.isfinite(res.x)):
        return beta0, float(links.rates(beta0[None, :])[0])
    beta = _project(res.x[:m], box, radius2, mode)
    return beta, float(links.rates(beta[None, :])[0])


def multistart_search(net, config=None):
    """Projected gradient ascent from seeded uniform starts.

    All starts advance in lockstep with per-start step sizes: each
    iteration proposes one projected subgradient step per start, accepts
    it on sufficient increase (parameter 1e-4), doubles the step after
    acceptance and halves it after rejection, until the step underflows
    or the iteration budget runs out.  Starts whose step has underflowed
    drop out of the batch, so late iterations only pay for the stragglers.

    The secrecy rate is a min over smooth eavesdropper branches, so near
    a crossing the plain worst-eavesdropper gradient zigzags.  Branches
    whose separation could be bridged within the current step are treated
    as tied, and the direction becomes the min-norm point of the tied
    gradients, which walks along the crossing instead of bouncing off it.
    As the step shrinks the tied set shrinks back to the plain gradient.

    First-order steps locate basins but crawl on curved valleys and on
    bound faces, so the best distinct terminals get a final epigraph-form
    SQP polish (see ``_polish``) before the winner is chosen.  Equal
    rates keep the earliest start, so a fixed seed gives a fixed answer.
    """
    config = config or OracleConfig()
    if net.m > 16:
        raise ValueError(f"multistart search supports at most 16 relays, got {net.m}")
    box, bmax = _mode_bounds(net, config.mode)
    radius2 = float(np.sum(bmax**2))
    scale = float(np.max(box))
    links = _LinkBatch(net)
    rng = np.random.default_rng(config.seed)
    B = _project_batch(rng.uniform(-box, box, size=(config.n_starts, net.m)), box, radius2, config.mode)
    rate = links.rates(B)
    step = np.full(config.n_starts, 0.25 * scale)
    alive = np.ones(config.n_starts, dtype=bool)
    total_steps = 0
    for _ in range(config.max_iter):
        idx = np.flatnonzero(alive)
        if idx.size == 0:
            break
        total_steps += idx.size
        Bi = B[idx]
        stepi = step[idx]
        if net.k:
            fvals, rows = links.branches(Bi)
            D = _direction_batch(fvals, rows, stepi, net.k)
        else:
            snr_d, grad_d, _, _ = links.links(Bi)
            D = grad_d / (1.0 + snr_d)[:, None] / _LOG2X2
        cand = _project_batch(Bi + stepi[:, None] * D, box, radius2, config.mode)
        gain = np.einsum("ij,ij->i", D, cand - Bi)
        cand_rate = links.rates(cand)
        acc = (gain > 0.0) & (cand_rate >= rate[idx] + 1e-4 * gain)
        up = idx[acc]
        B[up] = cand[acc]
        rate[up] = cand_rate[acc]
        step[up] *= 2.0
        step[idx[~acc]] *= 0.5
        alive[idx] = step[idx] > 1e-13 * scale
    picked = []
    for i in np.argsort(-rate, kind="stable"):
        if len(picked) == 8:
            break
        if all(np.max(np.abs(B[i] - B[j])) > 1e-6 * scale for j in picked):
            picked.append(int(i))
    best = int(np.argmax(rate))
    best_beta, best_rate = B[best], float(rate[best])
    for i in picked:
        pb, pr = _polish(links, B[i], box, radius2, config.mode)
        if pr > best_rate:
            best, best_beta, best_rate = i, pb, pr
    diag = {
        "n_starts": config.n_starts,
        "iterations": total_steps,
        "best_start": best,
        "polished": len(picked),
        "mode": config.mode,
    }
    return secrecy_rate(net, best_beta, method="oracle_multistart", diagnostics=diag, beta_max=box)
