"""Command line front end.

Subcommands: ``gen`` (draw a random network to JSON), ``validate`` (check a
network file), ``solve`` (run one solver on a network file), ``sweep`` (run
a Monte Carlo sweep from a JSON spec to CSV).  Exit codes: 0 success, 1
usage or input problem, 2 solver failure.  Diagnostics go to stderr, data to
stdout or the requested output file.  When no ``--seed`` is given, the
``AFSEC_SEED`` environment variable (default 0) supplies it.
"""

import argparse
import json
import os
import sys

import numpy as np

from .errors import SolverError
from .eta_solver import solve_iterative
from .experiments import ExperimentSpec, gen_network, run_sweep, write_sweep_csv
from .network import load_network, save_network, validate
from .oracle import OracleConfig, grid_search, multistart_search
from .scaled import solve_scaled
from .symmetric import SymmetricParams, optimal_beta
from .zero_forcing import solve_zero_forcing

SOLVE_METHODS = (
    "symmetric",
    "scaled_alpha",
    "zero_forcing",
    "sum_iterative",
    "individual_iterative",
    "oracle_grid",
    "oracle_multistart",
)


def _default_seed():
    try:
        return int(os.environ.get("AFSEC_SEED", "0"))
    except ValueError:
        raise ValueError("AFSEC_SEED must be an integer") from None


def _cmd_gen(args):
    seed = args.seed if args.seed is not None else _default_seed()
    net = gen_network(
        args.relays, args.eavesdroppers, seed,
        p_s=args.p_s, p_r=args.p_r, sigma2=args.sigma2, rayleigh_scale=args.scale,
    )
    if args.out:
        save_network(net, args.out)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        save_network(net, sys.stdout)
    return 0


def _cmd_validate(args):
    net = load_network(args.net)
    report = validate(net)
    print(f"m={net.m} k={net.k} degraded={str(report.degraded).lower()}")
    for w in report.warnings:
        print(f"warning: {w}")
    for e in report.errors:
        print(f"error: {e}")
    print("ok" if report.ok else "invalid")
    return 0


def _infer_alpha(net):
    if net.k != 1:
        raise ValueError("scaled_alpha needs exactly one eavesdropper (pass --alpha to override)")
    nz = np.flatnonzero(net.h_d)
    if nz.size == 0:
        raise ValueError("cannot infer alpha: all destination gains are zero")
    return float(net.h_e[0, nz[0]] / net.h_d[nz[0]])


def _symmetric_params(net):
    def common(a, what):
        u = np.unique(a)
        if u.size != 1:
            raise ValueError(f"network is not symmetric: {what} differ across relays")
        return float(u[0])

    h_e = 0.0
    if net.k == 1:
        h_e = common(net.h_e[0], "eavesdropper gains")
    elif net.k > 1:
        raise ValueError("symmetric solver supports at most one eavesdropper")
    return SymmetricParams(
        m=net.m,
        h_s=common(net.h_s, "source gains"),
        h_d=common(net.h_d, "destination gains"),
        h_e=h_e,
        p_s=net.p_s,
        p_r=common(net.p_r, "relay powers"),
        sigma2=net.sigma2,
    )


def _cmd_solve(args):
    net = load_network(args.net)
    seed = args.seed if args.seed is not None else _default_seed()
    if args.method == "symmetric":
        result = optimal_beta(_symmetric_params(net))
    elif args.method == "scaled_alpha":
        alpha = args.alpha if args.alpha is not None else _infer_alpha(net)
        result = solve_scaled(net, alpha)
    elif args.method == "zero_forcing":
        result = solve_zero_forcing(net)
    elif args.method == "sum_iterative":
        result = solve_iterative(net, "sum", delta=args.delta)
    elif args.method == "individual_iterative":
        result = solve_iterative(net, "individual", delta=args.delta)
    elif args.method == "oracle_grid":
        result = grid_search(net, OracleConfig(resolution=args.resolution))
    else:
        result = multistart_search(net, OracleConfig(seed=seed))
    rate = result.clamped_rate if args.clamp else result.secrecy_rate
    if args.json:
        d = result.to_dict()
        if args.clamp:
            d["secrecy_rate"] = rate
        print(json.dumps(d, indent=2, sort_keys=True))
    else:
        worst = float(np.max(result.snr_e)) if result.snr_e.size else 0.0
        print(f"method          {result.method}")
        print(f"secrecy_rate    {rate:.6f} bits")
        print(f"snr_d           {result.snr_d:.6f}")
        print(f"max snr_e       {worst:.3e}")
        print(f"beta            {np.array2string(result.beta.beta, precision=6)}")
    return 0


def _cmd_sweep(args):
    with open(args.spec) as fh:
        spec = ExperimentSpec.from_dict(json.load(fh))
    rows = run_sweep(spec, clamp=args.clamp)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_sweep_csv(rows, fh, spec)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        write_sweep_csv(rows, sys.stdout, spec)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="afsec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="draw a random degraded network to JSON")
    p.add_argument("--relays", "-m", type=int, required=True)
    p.add_argument("--eavesdroppers", "-k", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--p-s", dest="p_s", type=float, default=1.0)
    p.add_argument("--p-r", dest="p_r", type=float, default=5.0)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--scale", type=float, default=0.5, help="Rayleigh scale of the main gains")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("validate", help="check a network file and report")
    p.add_argument("net")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("solve", help="run one solver on a network file")
    p.add_argument("--net", required=True)
    p.add_argument("--method", required=True, choices=SOLVE_METHODS)
    p.add_argument("--json", action="store_true", help="emit the result as JSON")
    p.add_argument("--clamp", action="store_true", help="report max(0, rate)")
    p.add_argument("--delta", type=float, default=None, help="cap-search tolerance")
    p.add_argument("--alpha", type=float, default=None, help="eavesdropper scaling for scaled_alpha")
    p.add_argument("--resolution", type=int, default=41, help="grid points per dimension")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("sweep", help="run a Monte Carlo sweep from a JSON spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--clamp", action="store_true", help="average max(0, rate) instead of raw rates")
    p.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
