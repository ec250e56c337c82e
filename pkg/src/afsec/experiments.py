"""Random network generation and Monte Carlo sweeps.

Channel draws follow the usual benchmark protocol: main-link gains are
Rayleigh with scale 0.5, and each eavesdropper row is the destination row
multiplied componentwise by an independent Uniform[0, 1) draw, which makes
every generated instance degraded by construction.
"""

from dataclasses import dataclass, field
import csv

import numpy as np

from .errors import SolverError
from .eta_solver import solve_iterative
from .network import NetworkInstance
from .oracle import OracleConfig, grid_search, multistart_search
from .zero_forcing import solve_zero_forcing

SWEEP_VARS = ("source_power", "relay_count")
SWEEP_METHODS = (
    "zero_forcing",
    "sum_iterative",
    "individual_iterative",
    "oracle_grid",
    "oracle_multistart",
)
GENERATOR_ID = "pcg64"


def derive_trial_seed(base_seed, point_index, trial_index):
    """Deterministic per-trial seed material.

    Uses numpy's SeedSequence spawn-key hashing, which is documented, stable
    across platforms and collision-free across distinct (point, trial)
    pairs for a fixed base seed.
    """
    return np.random.SeedSequence(base_seed, spawn_key=(point_index, trial_index))


def gen_network(m, k, seed, p_s=1.0, p_r=5.0, sigma2=1.0, rayleigh_scale=0.5):
    """Draw a random degraded network instance.

    Draw order is fixed (h_s, then h_d, then the k uniform rows), so a given
    seed always produces the same instance.  ``seed`` may be an int or a
    SeedSequence.
    """
    rng = np.random.default_rng(seed)
    h_s = rng.rayleigh(rayleigh_scale, m)
    h_d = rng.rayleigh(rayleigh_scale, m)
    h_e = h_d[None, :] * rng.uniform(0.0, 1.0, size=(k, m))
    return NetworkInstance(m=m, k=k, h_s=h_s, h_d=h_d, h_e=h_e, p_s=p_s, p_r=p_r, sigma2=sigma2)


@dataclass(frozen=True)
class ExperimentSpec:
    """Definition of one sweep: which variable, which values, which solvers."""

    sweep: str
    values: tuple
    trials: int
    methods: tuple
    seed: int
    m: int = 5
    k: int = 3
    p_s: float = 1.0
    p_r: float = 5.0
    sigma2: float = 1.0

    def __post_init__(self):
        if self.sweep not in SWEEP_VARS:
            raise ValueError(f"sweep must be one of {SWEEP_VARS}, got {self.sweep!r}")
        for meth in self.methods:
            if meth not in SWEEP_METHODS:
                raise ValueError(f"unknown sweep method {meth!r}; choose from {SWEEP_METHODS}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.sweep == "relay_count":
            vals = tuple(int(v) for v in self.values)
            if any(v != float(w) for v, w in zip(vals, self.values)):
                raise ValueError("relay_count values must be integers")
            object.__setattr__(self, "values", vals)
        else:
            object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        object.__setattr__(self, "methods", tuple(self.methods))

    @classmethod
    def from_dict(cls, d):
        known = {"sweep", "values", "trials", "methods", "seed", "m", "k", "p_s", "p_r", "sigma2"}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown sweep spec field(s): {', '.join(sorted(unknown))}")
        return cls(**d)


@dataclass(frozen=True)
class ResultRow:
    sweep_var: str
    value: float
    method: str
    mean_rate_bits: float
    std_rate_bits: float
    mean_iters: float
    trials: int
    failures: int


def _solve_with(net, method, seed=0):
    if method == "zero_forcing":
        return solve_zero_forcing(net)
    if method == "sum_iterative":
        return solve_iterative(net, "sum")
    if method == "individual_iterative":
        return solve_iterative(net, "individual")
    if method == "oracle_grid":
        return grid_search(net, OracleConfig())
    if method == "oracle_multistart":
        return multistart_search(net, OracleConfig(seed=seed))
    raise ValueError(f"unknown method {method!r}")


def run_sweep(spec, clamp=False):
    """Run the sweep and return one :class:`ResultRow` per (value, method).

    Per-trial networks are derived from the base seed and the (point, trial)
    position, so trials are independent of evaluation order and of which
    methods are enabled.  Solver failures on individual trials are counted,
    excluded from the averages and do not abort the sweep.
    """
    rows = []
    for p_idx, value in enumerate(spec.values):
        m = spec.m if spec.sweep != "relay_count" else int(value)
        p_s = spec.p_s if spec.sweep != "source_power" else float(value)
        nets = [
            gen_network(
                m, spec.k, derive_trial_seed(spec.seed, p_idx, t),
                p_s=p_s, p_r=spec.p_r, sigma2=spec.sigma2,
            )
            for t in range(spec.trials)
        ]
        for method in spec.methods:
            rates = np.full(spec.trials, np.nan)
            iters = np.full(spec.trials, np.nan)
            failures = 0
            for t, net in enumerate(nets):
                try:
                    res = _solve_with(net, method, seed=spec.seed)
                except SolverError:
                    failures += 1
                    continue
                rates[t] = res.clamped_rate if clamp else res.secrecy_rate
                iters[t] = res.diagnostics.get("iterations", 1)
            good = rates[~np.isnan(rates)]
            rows.append(
                ResultRow(
                    sweep_var=spec.sweep,
                    value=value,
                    method=method,
                    mean_rate_bits=float(np.mean(good)) if good.size else np.nan,
                    std_rate_bits=float(np.std(good, ddof=1)) if good.size > 1 else 0.0,
                    mean_iters=float(np.nanmean(iters)) if good.size else np.nan,
                    trials=spec.trials,
                    failures=failures,
                )
            )
    return rows


def write_sweep_csv(rows, fileobj, spec=None):
    """Serialize sweep rows as CSV with a fixed column order and formats.

    Output is byte-stable: re-running the same spec reproduces the file
    exactly.  A leading comment line records the generator and base seed.
    """
    if spec is not None:
        fileobj.write(f"# afsec sweep generator={GENERATOR_ID} seed={spec.seed}\n")
    writer = csv.writer(fileobj, lineterminator="\n")
    writer.writerow(
        ["sweep_var", "value", "method", "mean_rate_bits", "std_rate_bits",
         "mean_iters", "trials", "failures"]
    )
    for r in rows:
        writer.writerow(
            [
                r.sweep_var,
                f"{r.value:.10g}",
                r.method,
                f"{r.mean_rate_bits:.10g}",
                f"{r.std_rate_bits:.10g}",
                f"{r.mean_iters:.10g}",
                r.trials,
                r.failures,
            ]
        )
