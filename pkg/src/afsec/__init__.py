"""Secrecy-rate optimization of amplify-and-forward relay gains.

The package models a two-hop diamond network: one source, ``m``
amplify-and-forward relays, one destination and ``k`` eavesdroppers, all
links real scalars.  It provides exact closed forms for structured instances
(symmetric networks, eavesdropper gains a common fraction of the destination
gains), a null-steering solver, a general convex iterative solver for
degraded instances under sum or per-relay power budgets, and brute-force
oracles for cross-checking.
"""

from .errors import (
    BracketError,
    InfeasibleError,
    NotDegradedError,
    NotScaledChannelError,
    SignPatternError,
    SolverError,
    UnboundedObjectiveError,
)
from .eta_solver import (
    EtaProblem,
    InnerSolution,
    build_inner_problem,
    count_strict_local_maxima,
    eta_profile,
    eta_upper_bound,
    inner_solve,
    single_eav_fast_path,
    solve_iterative,
    transform_to_omega,
    transform_to_v,
)
from .experiments import (
    ExperimentSpec,
    ResultRow,
    derive_trial_seed,
    gen_network,
    run_sweep,
    write_sweep_csv,
)
from .network import (
    METHODS,
    NetworkInstance,
    ScalingVector,
    SolveResult,
    ValidationReport,
    compute_beta_max,
    load_network,
    save_network,
    secrecy_rate,
    snr,
    validate,
)
from .numerics import (
    GoldenResult,
    GoldenSectionConfig,
    QcqpProblem,
    QcqpSolution,
    QuarticCoeffs,
    golden_section_max,
    iteration_bound,
    positive_quartic_root,
    rayleigh_direction,
    solve_linear_qcqp,
)
from .oracle import OracleConfig, grid_search, multistart_search, rate_and_gradient
from .scaled import (
    OrderedPrefix,
    ScaledProblem,
    boundary_radii,
    lambda_root,
    order_relays,
    solve_scaled,
    unconstrained_solution,
)
from .symmetric import SymmetricParams, optimal_beta, symmetric_rate
from .zero_forcing import ZfProgram, build_zf_program, solve_zero_forcing

__version__ = "0.1.0"
