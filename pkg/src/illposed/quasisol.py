"""Quasi-solutions on a norm ball: residual minimization over a compactum.

In the discrete space the closed ball {u : ||u||_h <= R} is a convex
compactum, and minimizing the residual ||A u - f_delta||_h over it admits an
exact finite algorithm instead of projected descent: either the minimal-norm
least-squares solution already fits inside the ball (multiplier 0), or the
constraint is active and the KKT system says the minimizer is
u(lambda) = (B + lambda)^{-1} A* f_delta with the unique lambda > 0 solving
||u(lambda)||_h = R.  That norm is strictly decreasing in lambda, so
bisection on log10(lambda) is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NumericalError
from .linops import DiscreteOperator, Grid, resolvent_solve
from .problems import minimal_norm_solution
from .validation import as_vector, check_positive

__all__ = ["BallCompactum", "QuasiResult", "project_onto_ball", "quasi_solution"]

_LOG_LAMBDA_LO = -14.0
_LOG_LAMBDA_HI = 6.0
_MAX_BISECTIONS = 200
_NORM_RTOL = 1e-12


@dataclass(frozen=True)
class BallCompactum:
    """Closed ball {u : ||u||_h <= radius} in the weighted space on ``grid``.

    Closed and bounded, hence compact in the finite-dimensional space, and
    convex; that is everything the quasi-solution theory asks of the
    constraint set.
    """

    radius: float
    grid: Grid

    def __post_init__(self):
        check_positive(self.radius, name="radius")

    def contains(self, u) -> bool:
        return self.grid.norm(u) <= self.radius * (1.0 + 1e-12)

    def project(self, v) -> np.ndarray:
        """Metric projection: v itself inside the ball, else v scaled to the sphere."""
        v = as_vector(v, self.grid.n, name="v")
        norm = self.grid.norm(v)
        if norm <= self.radius:
            return v.copy()
        return v * (self.radius / norm)


class QuasiResult(NamedTuple):
    """Constrained minimizer together with its KKT multiplier."""

    u: np.ndarray
    multiplier: float


def project_onto_ball(K: BallCompactum, v) -> np.ndarray:
    """Metric projection of ``v`` onto the ball, the closest point in K."""
    return K.project(v)


def quasi_solution(
    op: DiscreteOperator,
    f_delta,
    K: BallCompactum,
    trunc_tol: float = 1e-12,
) -> QuasiResult:
    """Minimize the residual ||A u - f_delta||_h over the ball K.

    Returns the exact KKT solution: the minimal-norm least-squares solution
    when it lies inside the ball (multiplier 0), otherwise the boundary
    point u(lambda) = (B + lambda)^{-1} A* f_delta at the unique lambda > 0
    with ||u(lambda)||_h = R, found by bisection on log10(lambda) in
    [-14, 6] to 1e-12 relative on the norm.

    ``trunc_tol`` is shared with :func:`minimal_norm_solution` so the
    null-space semantics of the interior branch match.

    Raises
    ------
    ValueError
        If the radius is not positive (raised by BallCompactum itself) or
        the ball lives on a different grid than the operator.
    NumericalError
        If the constraint is active but no multiplier in the bisection range
        brackets the norm equation (pathological truncation gap).
    """
    f_delta = as_vector(f_delta, op.n, name="f_delta")
    if K.grid.n != op.n:
        raise ValueError(
            f"ball is defined on an n={K.grid.n} grid but the operator has n={op.n}"
        )
    radius = K.radius
    u_ls = minimal_norm_solution(op, f_delta, trunc_tol)
    if op.norm_h(u_ls) <= radius:
        return QuasiResult(u=u_ls, multiplier=0.0)

    q = op.apply_adjoint(f_delta)

    def constrained(lam: float) -> np.ndarray:
        return resolvent_solve(op, lam, q)

    lo, hi = _LOG_LAMBDA_LO, _LOG_LAMBDA_HI
    if op.norm_h(constrained(10.0**lo)) < radius:
        raise NumericalError(
            "norm at the smallest admissible multiplier is already below the "
            "radius; the norm equation has no root in the bisection range"
        )
    lam = 10.0 ** (0.5 * (lo + hi))
    u = constrained(lam)
    norm = op.norm_h(u)
    for _ in range(_MAX_BISECTIONS):
        if abs(norm - radius) <= _NORM_RTOL * radius:
            break
        if norm > radius:
            lo = np.log10(lam)
        else:
            hi = np.log10(lam)
        lam = 10.0 ** (0.5 * (lo + hi))
        u = constrained(lam)
        norm = op.norm_h(u)
    return QuasiResult(u=u, multiplier=float(lam))
