"""Exception types shared across the solvers.

Anything deriving from :class:`SolverError` means the requested computation is
mathematically impossible or failed to converge on the given instance; input
shape and value problems raise plain ``ValueError``.  The CLI maps
``SolverError`` to exit code 2 and input problems to exit code 1.
"""


class SolverError(Exception):
    """Base class for solver-level failures."""


class InfeasibleError(SolverError):
    """The constraint set admits no solution (e.g. forcing rows exhaust all
    signal directions, or the destination row lies in their span)."""


class NotDegradedError(SolverError):
    """Some eavesdropper gain is not strictly below the destination gain
    relay-by-relay, so the capped-leakage constraint matrices lose positive
    definiteness and the search is not supported."""


class NotScaledChannelError(SolverError):
    """The eavesdropper row is not a common scalar multiple of the destination
    row; use the general iterative solver instead."""


class SignPatternError(SolverError):
    """Quartic coefficients fall outside the single-sign-change family that
    guarantees a unique positive root."""


class UnboundedObjectiveError(SolverError):
    """No positive definite constraint bounds the feasible set, so the linear
    objective can grow without limit."""


class BracketError(SolverError):
    """Golden-section search ran out of iterations before the bracket shrank
    to the requested width.  Carries the last bracket and best sample."""

    def __init__(self, message, bracket, best):
        super().__init__(message)
        self.bracket = bracket
        self.best = best
