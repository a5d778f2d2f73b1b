"""Landweber iteration on the normal equation with stopping rules.

The iteration u_{n+1} = u_n - mu (B u_n - q_delta), u_0 = 0, is gradient
descent on the residual quadratic; with 0 < mu < 1/||B|| every error mode
contracts on exact data, while noise grows at most linearly:
||u_{n,delta} - u_n||_h <= n mu delta.  The iteration index is the
regularization parameter, and the true error on noisy data semiconverges:
it falls, bottoms out, and rises again as the noise amplifies.

Three stopping rules are provided.  The discrepancy rule (first n with
residual <= C delta) is the practical default.  The oracle rule (argmin of
the true error) exists solely for experiments that need the trace minimum;
it requires the truth and is flagged as such in the trace.  The fixed rule
runs an explicit number of steps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linops import DiscreteOperator, spectral
from .problems import NoisyData
from .validation import as_vector, check_positive

__all__ = [
    "DiscrepancyStop",
    "OracleStop",
    "FixedStop",
    "IterationTrace",
    "landweber_run",
    "theoretical_stop_bound",
]

DEFAULT_MU = 0.9
DEFAULT_N_MAX = 100_000


@dataclass(frozen=True)
class DiscrepancyStop:
    """Stop at the first n with ||A u_n - f_delta||_h <= C * delta."""

    C: float = 1.5

    def __post_init__(self):
        if not self.C > 1.0:
            raise ValueError(f"discrepancy constant must exceed 1, got {self.C}")


@dataclass(frozen=True)
class OracleStop:
    """Stop at the argmin of the true error; experiment-only (needs the truth)."""

    truth: np.ndarray


@dataclass(frozen=True)
class FixedStop:
    """Run exactly n steps."""

    n: int

    def __post_init__(self):
        if int(self.n) < 0:
            raise ValueError(f"fixed stop index must be >= 0, got {self.n}")


@dataclass
class IterationTrace:
    """Per-step residuals (and errors, when the truth is known) of one run.

    ``residuals[k]`` is ||A u_k - f_delta||_h for k = 0..last; ``errors`` is
    the matching ||u_k - y||_h array or None.  ``stop_index`` is the chosen
    n(delta); ``stopped_by`` records which rule fired ("discrepancy",
    "oracle", "fixed", or "budget" when the discrepancy target was never
    reached); ``exhausted`` is True only in the budget case.
    """

    mu: float
    residuals: np.ndarray
    errors: np.ndarray | None
    stop_index: int
    stopped_by: str
    exhausted: bool


def landweber_run(
    op: DiscreteOperator,
    noisy: NoisyData,
    mu: float = DEFAULT_MU,
    n_max: int = DEFAULT_N_MAX,
    stop=None,
    truth=None,
) -> tuple[np.ndarray, IterationTrace]:
    """Run the Landweber iteration from u_0 = 0 until the stop rule fires.

    Parameters
    ----------
    op : DiscreteOperator
        Scaled operator (the step bound uses ||B|| from its spectral data).
    noisy : NoisyData
        Data with cached q_delta = A* f_delta.
    mu : float
        Step size; must satisfy 0 < mu < 1/||B||.
    n_max : int
        Budget for the discrepancy and oracle searches.
    stop : DiscrepancyStop | OracleStop | FixedStop
        Stopping rule; defaults to DiscrepancyStop().
    truth : array, optional
        When given, the trace records true errors ||u_n - y||_h.

    Returns
    -------
    (u, trace)
        The iterate at the stop index and the full trace.  If the
        discrepancy target is never reached within ``n_max`` steps, the
        final iterate (the best so far, since residuals are nonincreasing)
        is returned with ``trace.exhausted`` set instead of raising.

    Raises
    ------
    ValueError
        If mu is outside (0, 1/||B||) or n_max < 1.
    """
    if stop is None:
        stop = DiscrepancyStop()
    if not isinstance(stop, (DiscrepancyStop, OracleStop, FixedStop)):
        raise ValueError(f"unknown stopping rule {stop!r}")
    mu = check_positive(mu, name="mu")
    gram_norm = spectral(op).norm ** 2
    if gram_norm > 0.0 and mu >= 1.0 / gram_norm:
        raise ValueError(
            f"step size mu = {mu} violates mu < 1/||B|| = {1.0 / gram_norm:.6g}"
        )
    n_max = int(n_max)
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")

    if isinstance(stop, OracleStop):
        truth = stop.truth
    if truth is not None:
        truth = as_vector(truth, op.n, name="truth")

    horizon = int(stop.n) if isinstance(stop, FixedStop) else n_max
    gram = op.gram()
    matrix = op.matrix
    f_delta = noisy.f_delta
    q_delta = noisy.q_delta
    target = stop.C * noisy.delta if isinstance(stop, DiscrepancyStop) else None

    u = np.zeros(op.n)
    residuals = [op.norm_h(f_delta)]
    errors = [op.norm_h(u - truth)] if truth is not None else None

    best_error = errors[0] if errors is not None else None
    best_index = 0
    best_u = u.copy()

    stop_index = None
    stopped_by = None
    exhausted = False

    if target is not None and residuals[0] <= target:
        stop_index, stopped_by = 0, "discrepancy"

    n = 0
    while stop_index is None and n < horizon:
        u = u - mu * (gram @ u - q_delta)
        n += 1
        residuals.append(op.norm_h(matrix @ u - f_delta))
        if errors is not None:
            err = op.norm_h(u - truth)
            errors.append(err)
            if err < best_error:
                best_error, best_index, best_u = err, n, u.copy()
        if target is not None and residuals[-1] <= target:
            stop_index, stopped_by = n, "discrepancy"

    if stop_index is None:
        if isinstance(stop, FixedStop):
            stop_index, stopped_by = horizon, "fixed"
        elif isinstance(stop, OracleStop):
            stop_index, stopped_by = best_index, "oracle"
            u = best_u
        else:
            # Discrepancy never reached: residuals are nonincreasing, so the
            # final iterate is the best available.
            stop_index, stopped_by, exhausted = n, "budget", True

    trace = IterationTrace(
        mu=mu,
        residuals=np.asarray(residuals),
        errors=np.asarray(errors) if errors is not None else None,
        stop_index=stop_index,
        stopped_by=stopped_by,
        exhausted=exhausted,
    )
    return u, trace


def theoretical_stop_bound(trace_exact_errors, mu: float, delta: float) -> tuple[int, float]:
    """Balance the exact-data error against noise growth: min ||gamma_n|| + n mu delta.

    ``trace_exact_errors[n]`` is the exact-data error at step n (from an
    oracle/experiment run).  Returns the minimizing index and the minimal
    bound value; the bound dominates the realized noisy error at that index.

    Raises
    ------
    ValueError
        If the sequence is empty.
    """
    gamma = np.asarray(trace_exact_errors, dtype=float)
    if gamma.ndim != 1 or gamma.size == 0:
        raise ValueError("trace_exact_errors must be a nonempty sequence")
    mu = check_positive(mu, name="mu")
    delta = float(delta)
    if delta < 0.0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    values = gamma + mu * delta * np.arange(gamma.size)
    if delta == 0.0:
        # Pure balancing term: the last (smallest) exact error wins ties.
        n_star = gamma.size - 1 - int(np.argmin(values[::-1]))
    else:
        n_star = int(np.argmin(values))
    return n_star, float(values[n_star])
