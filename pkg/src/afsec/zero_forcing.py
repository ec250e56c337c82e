"""Null-steering solver: force zero receive SNR at every eavesdropper.

With omega_i = h_d[i] beta_i, g_i = sqrt(p_s/sigma2) h_s[i] and rho[j][i] =
h_e[j][i]/h_d[i], the eavesdropper conditions read sum_i h_s[i] rho[j][i]
omega_i = 0.  Normalizing the coherent destination gain, v = g.omega, and
stacking w = [omega/v, 1/v] gives w.w = (1 + |omega|^2)/v^2 = 1/snr_d, so
the best null-steering vector solves the convex quadratic program

    minimize  w.w
    s.t.      [g, 0].w = 1,   [h_s rho_j, 0].w = 0  (j = 1..k),
              |w_i| <= |h_d[i]| beta_max[i] * w_{m+1}.

(The quadratic form is minimized; maximizing it is unbounded.)  The k+1
equalities are eliminated with an orthonormal affine parameterization and
the remaining least-distance problem with 2m inequalities is solved through
the classical reduction to non-negative least squares, an active-set method.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from .errors import InfeasibleError
from .network import compute_beta_max, secrecy_rate, validate


@dataclass(frozen=True)
class ZfProgram:
    """Equality rows and bound couplings of the null-steering program.

    ``equalities`` is the (k+1) x (m+1) matrix whose first row is [g, 0] with
    right-hand side 1 and whose remaining rows are [h_s * rho_j, 0] with
    right-hand side 0.  ``bound_coef[i]`` couples coordinate i to the last
    one: |w_i| <= bound_coef[i] * w_{m+1}.
    """

    equalities: np.ndarray
    bound_coef: np.ndarray

    @property
    def m(self):
        return self.equalities.shape[1] - 1

    @property
    def k(self):
        return self.equalities.shape[0] - 1


def build_zf_program(net):
    report = validate(net)
    if not report.ok:
        raise ValueError("; ".join(report.errors))
    if net.k == 0:
        raise ValueError("no eavesdroppers to null; use the power-constrained solvers")
    g = np.sqrt(net.gamma_s) * net.h_s
    rho = net.h_e / net.h_d[None, :]
    equalities = np.zeros((net.k + 1, net.m + 1))
    equalities[0, : net.m] = g
    equalities[1:, : net.m] = net.h_s[None, :] * rho
    bound_coef = np.abs(net.h_d) * compute_beta_max(net)
    return ZfProgram(equalities=equalities, bound_coef=bound_coef)


def _least_distance(G, h):
    """min |y| s.t. G y >= h, via the Lawson-Hanson reduction to NNLS."""
    n = G.shape[1]
    E = np.vstack([G.T, h[None, :]])
    f = np.zeros(n + 1)
    f[-1] = 1.0
    # scipy.optimize.nnls (the 1.12+ rewrite) returns suboptimal points with a
    # wrong rnorm on some of these wide systems; BVLS solves the same
    # non-negative subproblem reliably
    res = scipy.optimize.lsq_linear(E, f, bounds=(0.0, np.inf), method="bvls")
    r = E @ res.x - f
    if abs(r[-1]) < 1e-12:
        raise InfeasibleError("bound constraints admit no solution")
    return -r[:n] / r[-1]


def solve_zero_forcing(net):
    """Best amplification vector with exactly zero eavesdropper SNR.

    Raises :class:`InfeasibleError` when the forcing rows leave no coherent
    signal direction; with k >= m that is the generic situation.
    """
    prog = build_zf_program(net)
    A = prog.equalities
    b = np.zeros(net.k + 1)
    b[0] = 1.0
    rank_a = np.linalg.matrix_rank(A)
    rank_ab = np.linalg.matrix_rank(np.column_stack([A, b]))
    if rank_ab > rank_a:
        if net.k >= net.m:
            raise InfeasibleError(
                f"{net.k} forcing rows exhaust the {net.m} relay dimensions: "
                "no coherent signal direction survives"
            )
        raise InfeasibleError(
            "destination row lies in the span of the forcing rows: nulling the "
            "eavesdroppers also nulls the destination"
        )
    w0, *_ = np.linalg.lstsq(A, b, rcond=None)
    Z = scipy.linalg.null_space(A)
    # inequalities |w_i| <= c_i w_last as G w <= 0 with rows +-e_i - c_i e_last
    m = net.m
    G = np.zeros((2 * m, m + 1))
    G[:m, :m] = np.eye(m)
    G[m:, :m] = -np.eye(m)
    G[:m, m] = -prog.bound_coef
    G[m:, m] = -prog.bound_coef
    y = _least_distance(-G @ Z, G @ w0)
    w = w0 + Z @ y
    if w[m] <= 0:
        raise InfeasibleError("degenerate normalization: no positive scaling survives")
    omega = w[:m] / w[m]
    beta = omega / net.h_d
    diag = {
        "w": w.tolist(),
        "snr_d_program": 1.0 / float(w @ w),
        "nullspace_dim": Z.shape[1],
    }
    return secrecy_rate(
        net, beta, method="zero_forcing", diagnostics=diag, beta_max=compute_beta_max(net)
    )
