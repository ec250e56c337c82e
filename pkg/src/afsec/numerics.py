"""Numerical kernels shared by the solvers.

Three small tools live here: a guarded positive-root finder for monic
quartics whose coefficients change sign exactly once, a golden-section
maximizer with memoized evaluations, and a log-barrier interior-point method
for maximizing a linear functional over an intersection of centered
ellipsoids.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BracketError, SignPatternError, UnboundedObjectiveError

INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0  # golden-section shrink factor, 0.618...


@dataclass(frozen=True)
class QuarticCoeffs:
    """Monic quartic x^4 + c3 x^3 + c2 x^2 + c1 x + c0."""

    c3: float
    c2: float
    c1: float
    c0: float

    def __call__(self, x):
        return (((x + self.c3) * x + self.c2) * x + self.c1) * x + self.c0

    def deriv(self, x):
        return ((4.0 * x + 3.0 * self.c3) * x + 2.0 * self.c2) * x + self.c1


def positive_quartic_root(q):
    """Unique positive root of a one-sign-change monic quartic.

    Requires the coefficient sequence (1, c3, c2, c1, c0) to change sign
    exactly once with c0 < 0; by Descartes' rule the quartic then has exactly
    one positive root.  Brackets it by doubling, bisects the bracket down to
    1e-12, then polishes with at most 5 Newton steps.  The result satisfies
    |P(root)| <= 1e-10 * max(1, |c0|).
    """
    coeffs = np.array([1.0, q.c3, q.c2, q.c1, q.c0])
    signs = np.sign(coeffs[coeffs != 0.0])
    variations = int(np.count_nonzero(np.diff(signs)))
    if variations != 1 or not q.c0 < 0:
        raise SignPatternError(
            f"coefficients {tuple(coeffs[1:])} do not change sign exactly once with c0 < 0"
        )
    hi = 1.0
    while q(hi) <= 0.0:
        hi *= 2.0
        if hi > 1e120:
            raise SignPatternError("failed to bracket a positive root")
    lo = 0.0
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # float spacing exhausted
            break
        if q(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    root = 0.5 * (lo + hi)
    for _ in range(5):
        d = q.deriv(root)
        if d == 0.0:
            break
        step = q(root) / d
        if root - step <= 0.0:
            break
        root -= step
        if abs(step) <= 1e-16 * root:
            break
    if abs(q(root)) > 1e-10 * max(1.0, abs(q.c0)):
        raise SignPatternError(f"root polish failed: residual {q(root):.3e} at {root:.6e}")
    return root


def iteration_bound(eta_range, delta):
    """Golden-section iteration budget ceil(2.08 ln(range/delta)), floored at 0."""
    if eta_range <= 0 or delta <= 0:
        raise ValueError("eta_range and delta must be positive")
    return max(0, int(np.ceil(2.08 * np.log(eta_range / delta))))


@dataclass(frozen=True)
class GoldenSectionConfig:
    """Bracket, target width and iteration budget for golden-section search.

    ``max_iter`` defaults to the iteration bound plus 2 (the two initial
    interior evaluations are counted as iterations); a caller-supplied budget
    below bound + 1 is rejected since the search could not finish.
    """

    eta_lo: float
    eta_hi: float
    delta: float
    max_iter: int = 0

    def __post_init__(self):
        if not self.eta_hi > self.eta_lo:
            raise ValueError("need eta_hi > eta_lo")
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        bound = iteration_bound(self.eta_hi - self.eta_lo, self.delta)
        if self.max_iter == 0:
            object.__setattr__(self, "max_iter", bound + 2)
        elif self.max_iter < bound + 1:
            raise ValueError(f"max_iter {self.max_iter} below iteration bound {bound} + 1")


@dataclass(frozen=True)
class GoldenResult:
    eta_star: float
    f_star: float
    iterations: int
    history: tuple
    bracket: tuple


def golden_section_max(f, cfg):
    """Maximize a unimodal scalar function over [eta_lo, eta_hi].

    Each iteration evaluates f at exactly one new interior point (the other
    is carried over), shrinking the bracket by the factor 0.618... until its
    width is at most ``cfg.delta``.  Returns the bracket midpoint, the best
    sampled value, the number of evaluations (the two start-up evaluations
    included) and the evaluation history.  Raises :class:`BracketError` if
    the budget runs out first.
    """
    a, b = float(cfg.eta_lo), float(cfg.eta_hi)
    history = []

    def sample(x):
        v = float(f(x))
        history.append((x, v))
        return v

    if b - a <= cfg.delta:
        mid = 0.5 * (a + b)
        return GoldenResult(mid, sample(mid), 1, tuple(history), (a, b))

    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = sample(x1), sample(x2)
    iterations = 2
    while b - a > cfg.delta:
        if iterations >= cfg.max_iter:
            best = max(history, key=lambda t: t[1])
            raise BracketError(
                f"bracket width {b - a:.3e} above delta {cfg.delta:.3e} after {iterations} iterations",
                bracket=(a, b),
                best=best,
            )
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = sample(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = sample(x2)
        iterations += 1
    f_star = max(v for _, v in history)
    return GoldenResult(0.5 * (a + b), f_star, iterations, tuple(history), (a, b))


@dataclass(frozen=True)
class QcqpProblem:
    """max c.v subject to v.A_j v <= 1 for every constraint matrix A_j.

    Matrices must be symmetric to 1e-12; v = 0 is strictly feasible by
    construction of the constraint form.
    """

    c: np.ndarray
    constraints: tuple

    def __post_init__(self):
        c = np.array(self.c, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "c", c)
        mats = []
        for A in self.constraints:
            A = np.array(A, dtype=float)
            if A.shape != (c.size, c.size):
                raise ValueError(f"constraint shape {A.shape} does not match dimension {c.size}")
            if np.max(np.abs(A - A.T)) > 1e-12 * max(1.0, np.max(np.abs(A))):
                raise ValueError("constraint matrix is not symmetric")
            A.setflags(write=False)
            mats.append(A)
        if not mats:
            raise ValueError("need at least one constraint")
        object.__setattr__(self, "constraints", tuple(mats))


@dataclass(frozen=True)
class QcqpSolution:
    v: np.ndarray
    objective: float
    outer_steps: int
    newton_steps: int


def _barrier_value(c, stack, v, t):
    q = np.einsum("kij,j->ki", stack, v) @ v
    if np.any(q >= 1.0):
        return np.inf, q
    return -t * float(c @ v) - float(np.sum(np.log1p(-q))), q


def solve_linear_qcqp(prob):
    """Log-barrier interior-point solve of a :class:`QcqpProblem`.

    Centers with damped Newton steps (Armijo backtracking, parameter 0.01,
    halving), multiplies the barrier parameter by 10 per outer step and stops
    once (#constraints)/t <= 1e-9, which bounds the suboptimality of the
    linear objective by the same amount.  Iterates stay strictly inside every
    ellipsoid.  Raises :class:`UnboundedObjectiveError` when no constraint
    matrix is positive definite.
    """
    c = prob.c
    stack = np.stack(prob.constraints)
    n_con = stack.shape[0]
    for A in prob.constraints:
        try:
            np.linalg.cholesky(A)
            break
        except np.linalg.LinAlgError:
            continue
    else:
        raise UnboundedObjectiveError("no positive definite constraint bounds the feasible set")

    v = np.zeros(c.size)
    t = 1.0
    outer = 0
    newton_total = 0
    while True:
        outer += 1
        for _ in range(60):
            Av = np.einsum("kij,j->ki", stack, v)
            q = Av @ v
            slack = 1.0 - q
            grad = -t * c + 2.0 * (Av / slack[:, None]).sum(axis=0)
            hess = 2.0 * np.tensordot(1.0 / slack, stack, axes=1) + 4.0 * np.einsum(
                "ki,kj,k->ij", Av, Av, 1.0 / slack**2
            )
            try:
                step_dir = -np.linalg.solve(hess, grad)
            except np.linalg.LinAlgError:
                step_dir = -np.linalg.lstsq(hess, grad, rcond=None)[0]
            decrement = -float(grad @ step_dir)
            if decrement / 2.0 <= 1e-12:
                break
            newton_total += 1
            phi0 = -t * float(c @ v) - float(np.sum(np.log(slack)))
            gd = float(grad @ step_dir)
            s = 1.0
            while s > 1e-14:
                cand = v + s * step_dir
                phi, _ = _barrier_value(c, stack, cand, t)
                if phi <= phi0 + 0.01 * s * gd:
                    v = cand
                    break
                s *= 0.5
            else:
                break
        if n_con / t <= 1e-9:
            break
        t *= 10.0
    return QcqpSolution(v=v, objective=float(c @ v), outer_steps=outer, newton_steps=newton_total)


def rayleigh_direction(h, C):
    """Maximize h.v over the ellipsoid v.C v <= 1 in closed form.

    Returns ``(v, value)`` with v = C^-1 h scaled so that v.C v = 1 and
    value = h.C^-1 h; then (h.v)^2 equals value.  C must be symmetric
    positive definite.
    """
    C = np.asarray(C, dtype=float)
    h = np.asarray(h, dtype=float)
    try:
        np.linalg.cholesky(C)
    except np.linalg.LinAlgError:
        raise ValueError("matrix must be symmetric positive definite") from None
    x = np.linalg.solve(C, h)
    value = float(h @ x)
    if value <= 0.0:
        raise ValueError("direction vector must be non-zero")
    return x / np.sqrt(value), value
