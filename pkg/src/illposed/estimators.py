"""Estimator-style facade over the functional solvers.

Thin wrappers in the scikit-learn idiom: constructors only store
hyperparameters (so ``get_params``/``set_params``/``clone`` work), and
``fit(op, f_delta, delta=..., truth=...)`` runs the underlying solver and
exposes the result through trailing-underscore attributes (``solution_``,
``residual_``, ``param_name_``, ``param_value_``, plus method-specific
extras).  The functional API in the sibling modules remains the primary
surface; these classes exist for pipelines and parameter searches that
expect the estimator protocol.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .dsm import EpsilonSchedule, dsm_evolve, dsm_stop_discrepancy, dsm_stop_root
from .landweber import DiscrepancyStop, FixedStop, OracleStop, landweber_run
from .linops import DiscreteOperator
from .problems import NoisyData
from .quasisol import BallCompactum, quasi_solution
from .validation import as_vector
from .variational import apriori_alpha, morozov_alpha, tikhonov_solve

__all__ = [
    "TikhonovEstimator",
    "QuasiSolutionEstimator",
    "LandweberEstimator",
    "DsmEstimator",
]


class _SolverEstimator(BaseEstimator):
    """Shared plumbing: input checks and the common fitted attributes."""

    def _check_inputs(self, op, f_delta):
        if not isinstance(op, DiscreteOperator):
            raise ValueError(f"op must be a DiscreteOperator, got {type(op).__name__}")
        return op, as_vector(f_delta, op.n, name="f_delta")

    def _finalize(self, op, f_delta, u, param_name, param_value):
        self.solution_ = u
        self.residual_ = op.norm_h(op.apply(u) - f_delta)
        self.param_name_ = param_name
        self.param_value_ = float(param_value)
        return self


class TikhonovEstimator(_SolverEstimator):
    """Tikhonov solver with a-priori, discrepancy, or fixed alpha choice.

    Parameters
    ----------
    rule : {"apriori", "morozov", "fixed"}
    exponent : float
        A-priori exponent in (0, 1); alpha = delta**exponent.
    C : float
        Morozov constant (> 1).
    alpha : float
        Value used by the fixed rule.
    """

    def __init__(self, rule="apriori", exponent=2.0 / 3.0, C=1.5, alpha=1e-3):
        self.rule = rule
        self.exponent = exponent
        self.C = C
        self.alpha = alpha

    def fit(self, op, f_delta, delta=0.0):
        op, f_delta = self._check_inputs(op, f_delta)
        if self.rule == "apriori":
            alpha = apriori_alpha(delta, self.exponent)
        elif self.rule == "morozov":
            alpha, _ = morozov_alpha(op, f_delta, delta, self.C)
        elif self.rule == "fixed":
            alpha = float(self.alpha)
        else:
            raise ValueError(f"unknown rule {self.rule!r}")
        u = tikhonov_solve(op, f_delta, alpha)
        self.alpha_ = float(alpha)
        return self._finalize(op, f_delta, u, "alpha", alpha)


class QuasiSolutionEstimator(_SolverEstimator):
    """Residual minimization over the ball ||u||_h <= radius."""

    def __init__(self, radius=1.0, trunc_tol=1e-12):
        self.radius = radius
        self.trunc_tol = trunc_tol

    def fit(self, op, f_delta, delta=0.0):
        op, f_delta = self._check_inputs(op, f_delta)
        ball = BallCompactum(radius=float(self.radius), grid=op.grid)
        u, multiplier = quasi_solution(op, f_delta, ball, self.trunc_tol)
        self.multiplier_ = float(multiplier)
        return self._finalize(op, f_delta, u, "lambda", multiplier)


class LandweberEstimator(_SolverEstimator):
    """Landweber iteration with discrepancy, oracle, or fixed stopping."""

    def __init__(self, mu=0.9, n_max=100_000, stop="discrepancy", C=1.5, n_fixed=100):
        self.mu = mu
        self.n_max = n_max
        self.stop = stop
        self.C = C
        self.n_fixed = n_fixed

    def fit(self, op, f_delta, delta=0.0, truth=None):
        op, f_delta = self._check_inputs(op, f_delta)
        noisy = NoisyData(
            f_delta=f_delta,
            delta=float(delta),
            seed=-1,
            q_delta=op.apply_adjoint(f_delta),
        )
        if self.stop == "discrepancy":
            rule = DiscrepancyStop(C=float(self.C))
        elif self.stop == "oracle":
            if truth is None:
                raise ValueError("oracle stopping requires truth=")
            rule = OracleStop(truth=as_vector(truth, op.n, name="truth"))
        elif self.stop == "fixed":
            rule = FixedStop(n=int(self.n_fixed))
        else:
            raise ValueError(f"unknown stop {self.stop!r}")
        u, trace = landweber_run(
            op, noisy, mu=float(self.mu), n_max=int(self.n_max), stop=rule, truth=truth
        )
        self.trace_ = trace
        self.n_iter_ = trace.stop_index
        self.exhausted_ = trace.exhausted
        return self._finalize(op, f_delta, u, "n", trace.stop_index)


class DsmEstimator(_SolverEstimator):
    """Dynamical systems method with root, discrepancy, or fixed-time stopping."""

    def __init__(self, c0=1.0, c1=1.0, p=0.5, stop="root", b=0.5, C=1.0, t_end=100.0):
        self.c0 = c0
        self.c1 = c1
        self.p = p
        self.stop = stop
        self.b = b
        self.C = C
        self.t_end = t_end

    def fit(self, op, f_delta, delta=0.0, truth=None):
        op, f_delta = self._check_inputs(op, f_delta)
        schedule = EpsilonSchedule(c0=float(self.c0), c1=float(self.c1), p=float(self.p))
        if self.stop == "root":
            t_stop, _ = dsm_stop_root(schedule, delta, float(self.b))
        elif self.stop == "discrepancy":
            t_stop, _ = dsm_stop_discrepancy(op, f_delta, delta, float(self.C), schedule)
        elif self.stop == "time":
            t_stop = float(self.t_end)
        else:
            raise ValueError(f"unknown stop {self.stop!r}")
        q_delta = op.apply_adjoint(f_delta)
        if t_stop <= 0.0:
            u = np.zeros(op.n)
            self.trajectory_ = None
        else:
            trajectory = dsm_evolve(
                op, q_delta, schedule, t_stop, f_delta=f_delta, truth=truth
            )
            u = trajectory.final
            self.trajectory_ = trajectory
        self.stop_time_ = float(t_stop)
        return self._finalize(op, f_delta, u, "t", t_stop)
