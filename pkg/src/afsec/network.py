"""Channel model for a two-hop amplify-and-forward diamond network.

A source transmits with power ``p_s`` through ``m`` single-antenna relays to a
destination while ``k`` eavesdroppers overhear the relay transmissions.  All
gains are real scalars: ``h_s[i]`` source to relay i, ``h_d[i]`` relay i to
destination, ``h_e[j][i]`` relay i to eavesdropper j.  Relay i multiplies its
received signal by an amplification factor ``beta[i]`` subject to its power
budget ``p_r[i]``; noise power is ``sigma2`` at every receiver.

Rates are in bits per channel use and carry the 1/2 prefactor of the two-hop
protocol.  The secrecy rate may be negative; ``SolveResult.clamped_rate``
applies the usual max(0, .) for reporting.
"""

from dataclasses import dataclass, field
import json
import warnings

import numpy as np

_SCHEMA_KEYS = ("m", "k", "h_s", "h_d", "h_e", "p_s", "p_r", "sigma2")

#: method tags attached to SolveResult by the solvers in this package
METHODS = (
    "symmetric",
    "scaled_alpha",
    "zero_forcing",
    "sum_iterative",
    "individual_iterative",
    "oracle_grid",
    "oracle_multistart",
)


def _freeze(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class NetworkInstance:
    """Immutable channel instance.

    Arrays are coerced to float64 and made read-only.  Construction is
    permissive on purpose; use :func:`validate` for a structured report of
    shape and value problems so that broken files can still be inspected.
    """

    m: int
    k: int
    h_s: np.ndarray
    h_d: np.ndarray
    h_e: np.ndarray
    p_s: float
    p_r: np.ndarray
    sigma2: float

    def __post_init__(self):
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "h_s", _freeze(self.h_s))
        object.__setattr__(self, "h_d", _freeze(self.h_d))
        h_e = np.array(self.h_e, dtype=float)
        if h_e.size == 0:
            h_e = h_e.reshape(0, self.m)
        object.__setattr__(self, "h_e", _freeze(h_e))
        object.__setattr__(self, "p_s", float(self.p_s))
        p_r = np.array(self.p_r, dtype=float)
        if p_r.ndim == 0:
            p_r = np.full(self.m, float(p_r))
        object.__setattr__(self, "p_r", _freeze(p_r))
        object.__setattr__(self, "sigma2", float(self.sigma2))

    @property
    def gamma_s(self):
        """Source SNR p_s / sigma2."""
        return self.p_s / self.sigma2

    def to_dict(self):
        return {
            "m": self.m,
            "k": self.k,
            "h_s": self.h_s.tolist(),
            "h_d": self.h_d.tolist(),
            "h_e": self.h_e.tolist(),
            "p_s": self.p_s,
            "p_r": self.p_r.tolist(),
            "sigma2": self.sigma2,
        }

    @classmethod
    def from_dict(cls, d):
        missing = [k for k in _SCHEMA_KEYS if k not in d]
        if missing:
            raise ValueError(f"network record is missing field(s): {', '.join(missing)}")
        unknown = [k for k in d if k not in _SCHEMA_KEYS]
        if unknown:
            warnings.warn(f"ignoring unknown network field(s): {', '.join(sorted(unknown))}")
        net = cls(d["m"], d["k"], d["h_s"], d["h_d"], d["h_e"], d["p_s"], d["p_r"], d["sigma2"])
        report = validate(net)
        dim_errors = [e for e in report.errors if "length" in e or "shape" in e]
        if dim_errors:
            raise ValueError("; ".join(dim_errors))
        return net


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate`: never raises, always reports."""

    errors: tuple
    warnings: tuple
    degraded: bool

    @property
    def ok(self):
        return not self.errors


def validate(net):
    """Check a :class:`NetworkInstance` and return a :class:`ValidationReport`.

    ``degraded`` is true iff every eavesdropper gain is strictly below the
    corresponding destination gain in magnitude, the regime in which a
    positive secrecy rate is achievable and the iterative solver applies.
    """
    errors = []
    warns = []
    if net.m < 1:
        errors.append(f"m must be at least 1, got {net.m}")
    if net.k < 0:
        errors.append(f"k must be non-negative, got {net.k}")
    if net.h_s.shape != (net.m,):
        errors.append(f"h_s length {net.h_s.shape} does not match m={net.m}")
    if net.h_d.shape != (net.m,):
        errors.append(f"h_d length {net.h_d.shape} does not match m={net.m}")
    if net.h_e.shape != (net.k, net.m):
        errors.append(f"h_e shape {net.h_e.shape} does not match (k, m)=({net.k}, {net.m})")
    if net.p_r.shape != (net.m,):
        errors.append(f"p_r length {net.p_r.shape} does not match m={net.m}")
    if not net.p_s > 0:
        errors.append(f"p_s must be positive, got {net.p_s}")
    if not net.sigma2 > 0:
        errors.append(f"sigma2 must be positive, got {net.sigma2}")
    if net.p_r.shape == (net.m,) and not np.all(net.p_r > 0):
        errors.append("every relay power p_r[i] must be positive")
    if net.h_d.shape == (net.m,) and np.any(net.h_d == 0):
        idx = np.flatnonzero(net.h_d == 0).tolist()
        errors.append(f"zero destination gain at relay index(es) {idx}")
    degraded = False
    if not errors and net.k > 0:
        degraded = bool(np.all(np.abs(net.h_e) < np.abs(net.h_d)[None, :]))
        if not degraded:
            warns.append("not degraded: some |h_e| >= |h_d|; iterative solver will reject")
    elif not errors:
        degraded = True
    return ValidationReport(tuple(errors), tuple(warns), degraded)


def compute_beta_max(net):
    """Per-relay amplification bounds sqrt(p_r[i] / (h_s[i]^2 p_s + sigma2))."""
    return np.sqrt(net.p_r / (net.h_s**2 * net.p_s + net.sigma2))


def snr(net, beta, receiver="destination"):
    """Receive SNR at the destination or at eavesdropper index ``receiver``.

    The relayed signal adds coherently, the relay-amplified noise does not:

        snr = (p_s/sigma2) * (sum_i h_s[i] beta[i] h[i])^2
                            / (1 + sum_i (beta[i] h[i])^2)

    with h the link gains toward the chosen receiver.
    """
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (net.m,):
        raise ValueError(f"beta has shape {beta.shape}, expected ({net.m},)")
    if isinstance(receiver, str):
        if receiver != "destination":
            raise ValueError(f"receiver must be 'destination' or an eavesdropper index, got {receiver!r}")
        h = net.h_d
    else:
        h = net.h_e[int(receiver)]
    num = float(np.dot(net.h_s * h, beta)) ** 2
    den = 1.0 + float(np.dot(beta * h, beta * h))
    return net.gamma_s * num / den


@dataclass(frozen=True)
class ScalingVector:
    """Per-relay amplification vector together with the bounds it respects."""

    beta: np.ndarray
    beta_max: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "beta", _freeze(self.beta))
        object.__setattr__(self, "beta_max", _freeze(self.beta_max))
        if self.beta.shape != self.beta_max.shape:
            raise ValueError("beta and beta_max must have the same shape")
        if np.any(np.abs(self.beta) > self.beta_max + 1e-9):
            worst = float(np.max(np.abs(self.beta) - self.beta_max))
            raise ValueError(f"beta exceeds beta_max by {worst:.3e}")


@dataclass(frozen=True)
class SolveResult:
    """A rate evaluation: amplification vector, SNRs and the secrecy rate.

    ``secrecy_rate`` is checked at construction against the stored SNRs, so a
    result can never carry an inconsistent rate.
    """

    beta: ScalingVector
    secrecy_rate: float
    snr_d: float
    snr_e: np.ndarray
    method: str
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "snr_e", _freeze(self.snr_e))
        object.__setattr__(self, "secrecy_rate", float(self.secrecy_rate))
        object.__setattr__(self, "snr_d", float(self.snr_d))
        worst = float(np.max(self.snr_e)) if self.snr_e.size else 0.0
        expected = 0.5 * np.log2(1.0 + self.snr_d) - 0.5 * np.log2(1.0 + worst)
        if abs(expected - self.secrecy_rate) > 1e-9:
            raise ValueError(
                f"secrecy_rate {self.secrecy_rate} inconsistent with SNRs (expected {expected})"
            )

    @property
    def clamped_rate(self):
        return max(0.0, self.secrecy_rate)

    def to_dict(self):
        return {
            "method": self.method,
            "secrecy_rate": self.secrecy_rate,
            "secrecy_rate_clamped": self.clamped_rate,
            "snr_d": self.snr_d,
            "snr_e": self.snr_e.tolist(),
            "beta": self.beta.beta.tolist(),
            "beta_max": self.beta.beta_max.tolist(),
            "diagnostics": _jsonable(self.diagnostics),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def secrecy_rate(net, beta, method="evaluation", diagnostics=None, beta_max=None):
    """Evaluate the secrecy rate at ``beta`` and wrap it in a SolveResult.

    rate = (1/2) log2(1 + snr_d) - (1/2) log2(1 + max_k snr_k), in bits.
    With no eavesdroppers the second term is zero.  The rate may be negative.

    ``beta_max`` defaults to the per-relay bounds, widened where the supplied
    beta exceeds them: evaluation never rejects a point, solvers attach the
    bounds of their own power mode.
    """
    beta = np.asarray(beta, dtype=float)
    snr_d = snr(net, beta)
    snr_e = np.array([snr(net, beta, j) for j in range(net.k)])
    worst = float(snr_e.max()) if net.k else 0.0
    rate = 0.5 * np.log2(1.0 + snr_d) - 0.5 * np.log2(1.0 + worst)
    if beta_max is None:
        beta_max = np.maximum(compute_beta_max(net), np.abs(beta))
    return SolveResult(
        beta=ScalingVector(beta, beta_max),
        secrecy_rate=rate,
        snr_d=snr_d,
        snr_e=snr_e,
        method=method,
        diagnostics=diagnostics or {},
    )


def save_network(net, path_or_file):
    """Write a network to JSON (schema keys only, row-major h_e)."""
    d = net.to_dict()
    if hasattr(path_or_file, "write"):
        json.dump(d, path_or_file, indent=2)
        path_or_file.write("\n")
    else:
        with open(path_or_file, "w") as fh:
            json.dump(d, fh, indent=2)
            fh.write("\n")


def load_network(path_or_file):
    """Read a network from JSON.

    Unknown top-level keys produce a warning; missing required keys and
    dimension mismatches raise ``ValueError`` naming the field.
    """
    if hasattr(path_or_file, "read"):
        d = json.load(path_or_file)
    else:
        with open(path_or_file) as fh:
            d = json.load(fh)
    if not isinstance(d, dict):
        raise ValueError("network file must contain a JSON object")
    return NetworkInstance.from_dict(d)
