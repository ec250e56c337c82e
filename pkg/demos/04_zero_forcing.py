"""Zero-forcing: trade destination SNR for exact eavesdropper silence.

Solves the nulling program on a random degraded network, verifies the
leakage is numerically zero, and compares the price paid against the
power-constrained iterative solver.  Also shows the K = M failure mode.
"""

import numpy as np

from afsec.errors import InfeasibleError
from afsec.eta_solver import solve_iterative
from afsec.experiments import gen_network
from afsec.zero_forcing import build_zf_program, solve_zero_forcing


def main():
    net = gen_network(4, 2, seed=11)
    prog = build_zf_program(net)
    print(f"m={net.m} k={net.k}: {prog.equalities.shape[0]} equality rows, "
          f"nullspace dimension {net.m - net.k}")

    res = solve_zero_forcing(net)
    print(f"beta   = {np.round(res.beta.beta, 4)}")
    print(f"snr_d  = {res.snr_d:.4f}")
    print(f"snr_e  = {np.max(res.snr_e):.3e}  (forced to zero)")
    print(f"rate   = {res.secrecy_rate:.4f} bits")

    ref = solve_iterative(net, "individual")
    print(f"\nindividual-power solver on the same network: {ref.secrecy_rate:.4f} bits")
    print(f"nulling price: {ref.secrecy_rate - res.secrecy_rate:.4f} bits")

    # with as many eavesdroppers as relays there is no direction left to use
    try:
        solve_zero_forcing(gen_network(3, 3, seed=11))
    except InfeasibleError as exc:
        print(f"\nK = M correctly rejected: {exc}")


if __name__ == "__main__":
    main()
