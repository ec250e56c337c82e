"""Closed-form solution for fully symmetric networks.

When every relay sees the same gains (h_s, h_d and a common eavesdropper
gain h_e) and the same power budget, the best amplification vector is equal
across relays, so the search collapses to a scalar.  With gamma_eff =
(p_s/sigma2) h_s^2 the rate of the common factor beta is

    R(beta) = (1/2) log2[ (1 + gamma_eff S^2 h_d^2/(1 + h_d^2 Q))
                        / (1 + gamma_eff S^2 h_e^2/(1 + h_e^2 Q)) ]

with S = m beta, Q = m beta^2.  For |h_e| < |h_d| the ratio is unimodal in
beta with the interior stationary point

    beta_int^4 = sigma2 / (m^2 h_d^2 h_e^2 (m h_s^2 p_s + sigma2)),

so the optimum is min(beta_int, beta_max).
"""

from dataclasses import dataclass
import warnings

import numpy as np

from .network import NetworkInstance, compute_beta_max, secrecy_rate


@dataclass(frozen=True)
class SymmetricParams:
    """Scalar gains and powers of a symmetric m-relay network."""

    m: int
    h_s: float
    h_d: float
    h_e: float
    p_s: float
    p_r: float
    sigma2: float

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one relay")
        if self.h_d == 0:
            raise ValueError("destination gain must be non-zero")
        if self.p_s <= 0 or self.p_r <= 0 or self.sigma2 <= 0:
            raise ValueError("powers and noise must be positive")

    @property
    def beta_max(self):
        return float(np.sqrt(self.p_r / (self.h_s**2 * self.p_s + self.sigma2)))

    def to_network(self):
        """Expand to a NetworkInstance with one eavesdropper row of h_e."""
        m = self.m
        return NetworkInstance(
            m=m,
            k=1,
            h_s=np.full(m, self.h_s),
            h_d=np.full(m, self.h_d),
            h_e=np.full((1, m), self.h_e),
            p_s=self.p_s,
            p_r=np.full(m, self.p_r),
            sigma2=self.sigma2,
        )


def _link_snr(params, beta, h):
    gamma_eff = params.p_s / params.sigma2 * params.h_s**2
    total = params.m * beta
    power = params.m * beta**2
    return gamma_eff * total**2 * h**2 / (1.0 + h**2 * power)


def symmetric_rate(params, beta):
    """Secrecy rate (bits) of the common amplification factor ``beta``.

    Equals the general evaluation on the expanded network with all relays at
    beta; may be negative when |h_e| > |h_d|.
    """
    snr_d = _link_snr(params, beta, params.h_d)
    snr_e = _link_snr(params, beta, params.h_e)
    return 0.5 * np.log2(1.0 + snr_d) - 0.5 * np.log2(1.0 + snr_e)


def optimal_beta(params):
    """Best common amplification factor, evaluated on the expanded network.

    Branches:
      * degenerate |h_e| = |h_d|: the rate is identically zero, returns
        beta_max with diagnostics flag "degenerate";
      * |h_e| > |h_d|: the rate is non-positive, warns and returns beta = 0;
      * h_e = 0: the rate grows with beta, returns beta_max;
      * otherwise min(interior stationary point, beta_max).
    """
    bmax = params.beta_max
    diag = {"beta_max": bmax, "beta_interior": None}
    if params.h_e**2 == params.h_d**2:
        beta_star = bmax
        diag["branch"] = "degenerate"
    elif params.h_e**2 > params.h_d**2:
        warnings.warn("symmetric network is not degraded (|h_e| > |h_d|): rate is non-positive")
        beta_star = 0.0
        diag["branch"] = "reversed"
    elif params.h_e == 0.0:
        beta_star = bmax
        diag["branch"] = "boundary"
    else:
        beta_int = (
            params.sigma2
            / (
                params.m**2
                * params.h_d**2
                * params.h_e**2
                * (params.m * params.h_s**2 * params.p_s + params.sigma2)
            )
        ) ** 0.25
        diag["beta_interior"] = beta_int
        beta_star = min(beta_int, bmax)
        diag["branch"] = "interior" if beta_int < bmax else "boundary"
    diag["beta_star"] = beta_star
    net = params.to_network()
    return secrecy_rate(
        net,
        np.full(params.m, beta_star),
        method="symmetric",
        diagnostics=diag,
        beta_max=compute_beta_max(net),
    )
