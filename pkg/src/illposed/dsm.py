"""Dynamical systems method for the linear equation on the normal form.

The trajectory solves u' = -u + (B + eps(t))^{-1} q_delta with a scaling
function eps(t) decaying to zero slowly enough that its integral diverges.
Because the linear part is exactly -u, variation of constants gives an
unconditionally stable exponential step

    u(t + D) = e^{-D} u(t) + (1 - e^{-D}) g(t + D/2),
    g(t) = (B + eps(t))^{-1} q_delta,

whose only error source is the slow drift of g; the time grid is geometric
(first step 0.1, ratio 1.2) because g varies on a logarithmic time scale,
and that makes the multi-decade horizons demanded by the stopping rules
cheap (tens of factorizations, not millions of steps).

Stopping: either the explicit root of 2 sqrt(eps(t)) = delta**b, which for
the power schedule eps(t) = c1/(c0 + t)**p has the closed form
t = (4 c1 / delta**(2b))**(1/p) - c0, or the DSM discrepancy principle
||A (B + eps)^{-1} A* f_delta - f_delta||_h = C delta, whose left side is
the Tikhonov residual with eps in place of alpha.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
from typing import NamedTuple

import numpy as np

from .errors import NoiseDominatesDataError, NoRootError, NumericalError
from .linops import DiscreteOperator, _shifted_spd_solve
from .validation import as_vector, check_positive, check_unit_interval
from .variational import tikhonov_residual

__all__ = [
    "EpsilonSchedule",
    "DsmTrajectory",
    "StopRoot",
    "DsmDiscrepancyResult",
    "dsm_evolve",
    "dsm_stop_root",
    "dsm_stop_discrepancy",
]

FIRST_STEP = 0.1
STEP_RATIO = 1.2

_LOG_EPS_LO = -14.0
_LOG_EPS_HI = 6.0
_MAX_BISECTIONS = 200


@dataclass(frozen=True)
class EpsilonSchedule:
    """Power-law scaling schedule eps(t) = c1 / (c0 + t)**p.

    Strictly positive, strictly decreasing to zero, and with divergent
    integral because p < 1; these three properties are what makes the flow
    converge as the regularizer fades.  Instances are callables t -> eps(t).
    """

    c0: float = 1.0
    c1: float = 1.0
    p: float = 0.5

    def __post_init__(self):
        check_positive(self.c0, name="c0")
        check_positive(self.c1, name="c1")
        check_unit_interval(self.p, name="p")

    def __call__(self, t: float) -> float:
        return self.c1 / (self.c0 + t) ** self.p

    def inverse(self, eps: float) -> float:
        """The time with eps(t) = eps, clamped at 0 when eps >= eps(0)."""
        eps = check_positive(eps, name="eps")
        return max(0.0, (self.c1 / eps) ** (1.0 / self.p) - self.c0)


@dataclass
class DsmTrajectory:
    """Snapshots of one DSM integration on its geometric time grid.

    ``times`` starts at 0 and ends exactly at the requested horizon;
    ``states[k]`` is u(times[k]); ``epsilons[k]`` = eps(times[k]).
    ``residuals``/``errors`` are recorded when f_delta/truth were supplied.
    ``step_policy`` documents the grid construction.
    """

    times: np.ndarray
    states: np.ndarray
    epsilons: np.ndarray
    residuals: np.ndarray | None
    errors: np.ndarray | None
    t_end: float
    step_policy: str

    @property
    def final(self) -> np.ndarray:
        """u at the stop time (the last grid point)."""
        return self.states[-1]


class StopRoot(NamedTuple):
    """Stopping time from the root rule, with a flag for the clamped case."""

    t: float
    at_boundary: bool


class DsmDiscrepancyResult(NamedTuple):
    """Stopping time from the DSM discrepancy principle and its epsilon."""

    t: float
    epsilon: float


def _time_grid(t_end: float) -> np.ndarray:
    """Geometric grid from 0 to exactly t_end (first step 0.1, ratio 1.2)."""
    times = [0.0]
    step = FIRST_STEP
    t = 0.0
    while t < t_end:
        t = min(t + step, t_end)
        times.append(t)
        step *= STEP_RATIO
    return np.asarray(times)


def dsm_evolve(
    op: DiscreteOperator,
    q_delta,
    schedule,
    t_end: float,
    u0=None,
    f_delta=None,
    truth=None,
) -> DsmTrajectory:
    """Integrate u' = -u + (B + eps(t))^{-1} q_delta up to ``t_end``.

    Parameters
    ----------
    op : DiscreteOperator
    q_delta : array
        Normal-equation right-hand side A* f_delta.
    schedule : callable t -> eps
        Usually an :class:`EpsilonSchedule`; any nonnegative callable works
        (a schedule frozen to a constant reproduces the exact
        variation-of-constants solution to roundoff).
    t_end : float
        Horizon (> 0); the grid's last point lands on it exactly.
    u0 : array, optional
        Initial state, default 0.  The theory does not require it to be
        close to anything.
    f_delta, truth : array, optional
        When given, the trajectory records residuals ||A u - f_delta||_h
        and errors ||u - truth||_h at every grid point.

    Raises
    ------
    NumericalError
        If the state stops being finite; the message names the offending t.
    """
    t_end = check_positive(t_end, name="t_end")
    q_delta = as_vector(q_delta, op.n, name="q_delta")
    u = (
        np.zeros(op.n)
        if u0 is None
        else as_vector(u0, op.n, name="u0").copy()
    )
    if f_delta is not None:
        f_delta = as_vector(f_delta, op.n, name="f_delta")
    if truth is not None:
        truth = as_vector(truth, op.n, name="truth")

    times = _time_grid(t_end)
    states = np.empty((times.size, op.n))
    states[0] = u
    residuals = [] if f_delta is not None else None
    errors = [] if truth is not None else None

    def record(state):
        if residuals is not None:
            residuals.append(op.norm_h(op.apply(state) - f_delta))
        if errors is not None:
            errors.append(op.norm_h(state - truth))

    record(u)
    for k in range(times.size - 1):
        t0, t1 = times[k], times[k + 1]
        delta_t = t1 - t0
        eps_mid = float(schedule(t0 + 0.5 * delta_t))
        if not (eps_mid >= 0.0 and math.isfinite(eps_mid)):
            raise NumericalError(
                f"schedule produced invalid eps = {eps_mid} at t = {t0 + 0.5 * delta_t}"
            )
        forcing = _shifted_spd_solve(op, eps_mid, q_delta)
        decay = math.exp(-delta_t)
        u = decay * u + (1.0 - decay) * forcing
        if not np.all(np.isfinite(u)):
            raise NumericalError(f"non-finite DSM state at t = {t1}")
        states[k + 1] = u
        record(u)

    return DsmTrajectory(
        times=times,
        states=states,
        epsilons=np.asarray([float(schedule(t)) for t in times]),
        residuals=np.asarray(residuals) if residuals is not None else None,
        errors=np.asarray(errors) if errors is not None else None,
        t_end=float(t_end),
        step_policy=f"geometric(first={FIRST_STEP}, ratio={STEP_RATIO})",
    )


def _schedule_inverse(schedule, eps_target: float) -> float:
    """Time with eps(t) = eps_target for a decreasing schedule, clamped at 0."""
    if isinstance(schedule, EpsilonSchedule):
        return schedule.inverse(eps_target)
    if float(schedule(0.0)) <= eps_target:
        return 0.0
    lo, hi = 0.0, 1.0
    while float(schedule(hi)) > eps_target:
        hi *= 4.0
        if hi > 1e30:
            raise NoRootError("schedule never decays to the target epsilon")
    for _ in range(_MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if float(schedule(mid)) > eps_target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-13 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def dsm_stop_root(schedule, delta: float, b: float = 0.5) -> StopRoot:
    """Solve 2 sqrt(eps(t)) = delta**b for the stopping time.

    Equivalently eps(t_delta) = delta**(2b)/4; for the power schedule the
    closed form is t = (4 c1 / delta**(2b))**(1/p) - c0.  If the target
    epsilon is not below eps(0) the rule fires immediately: the result is
    (0, at_boundary=True).  A monotone bisection fallback handles schedules
    that are plain callables.
    """
    delta = check_unit_interval(delta, name="delta")
    b = check_unit_interval(b, name="b")
    eps_target = delta ** (2.0 * b) / 4.0
    if eps_target >= float(schedule(0.0)):
        return StopRoot(t=0.0, at_boundary=True)
    return StopRoot(t=_schedule_inverse(schedule, eps_target), at_boundary=False)


def dsm_stop_discrepancy(
    op: DiscreteOperator,
    f_delta,
    delta: float,
    C: float = 1.0,
    schedule: EpsilonSchedule | None = None,
) -> DsmDiscrepancyResult:
    """DSM discrepancy principle: stop where the stationary residual hits C delta.

    The residual r(eps) = ||A (B + eps)^{-1} A* f_delta - f_delta||_h is the
    Tikhonov discrepancy with eps in the role of alpha, hence monotone
    increasing in eps; its root eps_dagger is found by bisection on
    log10(eps) and mapped to the stopping time through the schedule.

    Raises
    ------
    NoiseDominatesDataError
        If ||f_delta||_h <= C*delta.
    NoRootError
        If the residual at eps = 1e-14 already exceeds C*delta.
    """
    if schedule is None:
        schedule = EpsilonSchedule()
    f_delta = as_vector(f_delta, op.n, name="f_delta")
    delta = check_positive(delta, name="delta")
    C = float(C)
    if C < 1.0:
        raise ValueError(f"discrepancy constant must be >= 1, got {C}")
    target = C * delta
    if op.norm_h(f_delta) <= target:
        raise NoiseDominatesDataError(
            f"||f_delta||_h = {op.norm_h(f_delta):.6g} <= C*delta = {target:.6g}"
        )
    if tikhonov_residual(op, f_delta, 10.0**_LOG_EPS_LO) > target:
        raise NoRootError(
            f"residual floor at eps = 1e-14 exceeds C*delta = {target:.6g}"
        )
    lo, hi = _LOG_EPS_LO, _LOG_EPS_HI
    eps = 10.0 ** (0.5 * (lo + hi))
    residual = tikhonov_residual(op, f_delta, eps)
    for _ in range(_MAX_BISECTIONS):
        if abs(residual - target) <= 1e-12 * target:
            break
        if residual < target:
            lo = math.log10(eps)
        else:
            hi = math.log10(eps)
        eps = 10.0 ** (0.5 * (lo + hi))
        residual = tikhonov_residual(op, f_delta, eps)
    return DsmDiscrepancyResult(t=_schedule_inverse(schedule, eps), epsilon=float(eps))
