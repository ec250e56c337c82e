"""Closed-form optimum for the all-relays-identical network.

Sweeps the eavesdropper gain from harmless to dominant and prints which
branch of the closed form fires: interior stationary point, power-bound
boundary, or the reversed regime where silence is optimal.
"""

import numpy as np

from afsec.symmetric import SymmetricParams, optimal_beta, symmetric_rate


def main():
    base = dict(m=4, h_s=1.0, h_d=1.0, p_s=1.0, p_r=2.0, sigma2=1.0)
    print(f"{'h_e':>5s} {'branch':>10s} {'beta*':>8s} {'beta_max':>8s} {'rate':>8s}")
    for h_e in (0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0, 1.3):
        params = SymmetricParams(h_e=h_e, **base)
        res = optimal_beta(params)
        d = res.diagnostics
        print(f"{h_e:5.2f} {d['branch']:>10s} {d['beta_star']:8.4f} "
              f"{params.beta_max:8.4f} {res.secrecy_rate:8.4f}")

    # cross-check one interior point against a dense 1-D scan
    params = SymmetricParams(h_e=0.55, **base)
    res = optimal_beta(params)
    grid = np.linspace(0.0, params.beta_max, 20001)
    vals = symmetric_rate(params, grid)
    i = int(np.argmax(vals))
    print(f"\ninterior check at h_e=0.55: closed form {res.secrecy_rate:.6f}, "
          f"scan {vals[i]:.6f}, argmax gap {abs(res.diagnostics['beta_star'] - grid[i]):.2e}")


if __name__ == "__main__":
    main()
