"""Step-by-step solve of a scaled-eavesdropper instance (h_e = alpha * h_d).

Shows the geometry behind the exact algorithm: the bound-free radius, the
relay activation order, the boundary radii, and how the clamped prefix
grows as the relay power budget shrinks.
"""

import numpy as np

from afsec.network import NetworkInstance, compute_beta_max
from afsec.scaled import ScaledProblem, boundary_radii, order_relays, solve_scaled, unconstrained_solution


def main():
    rng = np.random.default_rng(7)
    m, alpha = 3, 0.4
    h_s = rng.uniform(0.3, 1.5, m)
    h_d = rng.uniform(0.5, 1.5, m)
    print(f"m={m} alpha={alpha}  h_s={np.round(h_s, 3)}  h_d={np.round(h_d, 3)}")

    for p_r in (50.0, 2.0, 0.3, 0.02):
        net = NetworkInstance(m, 1, h_s, h_d, (alpha * h_d)[None, :],
                              1.0, np.full(m, p_r), 1.0)
        prob = ScaledProblem.from_network(net, alpha)
        omega0, r_star = unconstrained_solution(prob)
        op = order_relays(prob)
        radii = boundary_radii(op)
        res = solve_scaled(net, alpha)
        d = res.diagnostics
        beta = res.beta.beta
        active = np.flatnonzero(np.abs(beta) >= compute_beta_max(net) * (1 - 1e-9))
        print(f"\nP_r={p_r:g}")
        print(f"  bound-free radius r*={r_star:.4f}, boundary radii {np.round(radii, 4)}")
        print(f"  activation order {d['order']}, clamped prefix {d['prefix_size']}, "
              f"bound-active relays {active.tolist()}")
        print(f"  beta={np.round(beta, 4)}  rate={res.secrecy_rate:.4f} bits")


if __name__ == "__main__":
    main()
