"""Canonical ill-posed test problems, noise injection, and demonstrations.

A :class:`Problem` bundles an operator (rescaled to unit norm), a ground
truth orthogonal to the numerical null-space, and consistent exact data
f = A y.  Noise of an exactly prescribed level is injected by renormalizing
a seeded Gaussian direction, which makes every delta-dependent bound sharply
testable instead of holding only in expectation.

The module also hosts the two stand-alone demonstrations: stable numerical
differentiation with the step balanced against the noise level, and the
closed-form Cauchy-problem table showing Hadamard instability for the
Laplace equation.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .errors import DegenerateOperatorError, OutOfDomainError
from .linops import (
    DiscreteOperator,
    build_fredholm_operator,
    build_integration_operator,
    scale_to_unit,
    spectral,
)
from .validation import as_vector, check_positive, check_unit_interval

__all__ = [
    "Problem",
    "NoisyData",
    "HadamardRow",
    "TRUTH_FUNCTIONS",
    "PROBLEM_KINDS",
    "truth_one",
    "truth_cospi",
    "truth_sin1",
    "truth_hat",
    "make_problem",
    "add_noise",
    "minimal_norm_solution",
    "stable_differentiate",
    "hadamard_instability_table",
]


@dataclass(frozen=True)
class Problem:
    """Operator, ground truth, and consistent exact data on one grid.

    The operator is rescaled to ||A|| = 1, the truth is projected onto the
    retained singular directions (s_j > 1e-12 * s_1) so it is orthogonal to
    the numerical null-space, and ``data`` is exactly A @ truth.
    """

    op: DiscreteOperator
    truth: np.ndarray
    data: np.ndarray
    label: str


@dataclass(frozen=True)
class NoisyData:
    """Perturbed right-hand side with its exact achieved noise level.

    ``delta`` is the h-norm of f_delta - f (hit exactly by construction);
    ``q_delta`` caches A* f_delta, the right-hand side of the normal
    equation, with ||q_delta - q||_h <= delta because ||A*|| <= 1.
    """

    f_delta: np.ndarray
    delta: float
    seed: int
    q_delta: np.ndarray


def truth_one(x):
    """Constant 1."""
    return np.ones_like(np.asarray(x, dtype=float))


def truth_cospi(x):
    """cos(pi x)."""
    return np.cos(np.pi * np.asarray(x, dtype=float))


def truth_sin1(x):
    """sqrt(2) sin(pi x): the normalized first Dirichlet eigenfunction."""
    return math.sqrt(2.0) * np.sin(np.pi * np.asarray(x, dtype=float))


def truth_hat(x):
    """Piecewise-linear hat peaking at x = 1/2."""
    return 1.0 - 2.0 * np.abs(np.asarray(x, dtype=float) - 0.5)


TRUTH_FUNCTIONS = {
    "one": truth_one,
    "cospi": truth_cospi,
    "sin1": truth_sin1,
    "hat": truth_hat,
}

PROBLEM_KINDS = ("differentiation", "fredholm")


def make_problem(kind: str, n: int, truth) -> Problem:
    """Build a canonical test problem with consistent exact data.

    Parameters
    ----------
    kind : {"differentiation", "fredholm"}
        ``differentiation`` uses the Volterra integration operator (solving
        for u means differentiating f); ``fredholm`` uses the first-kind
        operator with the Dirichlet Green's kernel.
    n : int
        Grid size.
    truth : callable x -> real, or str
        Ground truth sampled at the grid nodes; must be finite on (0, 1).
        A string names an entry of :data:`TRUTH_FUNCTIONS`.

    Returns
    -------
    Problem
        Operator rescaled to ||A|| = 1, truth projected onto the retained
        singular directions, and data f = A @ truth.
    """
    if kind not in PROBLEM_KINDS:
        raise ValueError(f"unknown problem kind {kind!r}; expected {PROBLEM_KINDS}")
    if isinstance(truth, str):
        if truth not in TRUTH_FUNCTIONS:
            raise ValueError(
                f"unknown truth {truth!r}; expected one of {sorted(TRUTH_FUNCTIONS)}"
            )
        truth = TRUTH_FUNCTIONS[truth]
    if kind == "differentiation":
        raw = build_integration_operator(n)
    else:
        raw = build_fredholm_operator(None, n)
    op, _ = scale_to_unit(raw)

    nodes = op.grid.nodes
    try:
        sampled = np.asarray(truth(nodes), dtype=float)
        if sampled.shape != nodes.shape:
            raise ValueError
    except (TypeError, ValueError):
        # Truth is not vectorized; sample it pointwise.
        sampled = np.array([truth(x) for x in nodes], dtype=float)
    if not np.all(np.isfinite(sampled)):
        raise ValueError("truth function produced non-finite values on the grid")

    data_sd = spectral(op)
    keep = data_sd.s > 1e-12 * data_sd.norm
    basis = data_sd.right[:, keep]
    y = basis @ (op.h * (basis.T @ sampled))
    y.flags.writeable = False
    f = op.apply(y)
    f.flags.writeable = False
    return Problem(op=op, truth=y, data=f, label=f"{kind}(n={n})")


def add_noise(problem: Problem, delta: float, seed: int) -> NoisyData:
    """Perturb the exact data to an exactly prescribed noise level.

    Draws a seeded Gaussian direction e and returns
    f_delta = f + delta * e / ||e||_h, so ||f_delta - f||_h = delta exactly
    (up to roundoff).  ``delta = 0`` returns the exact data bit-identically.
    Same seed, same output; different seeds give different directions with
    the identical level.
    """
    delta = float(delta)
    if delta < 0.0 or not np.isfinite(delta):
        raise ValueError(f"delta must be a finite value >= 0, got {delta}")
    seed = int(seed)
    if delta == 0.0:
        f_delta = problem.data.copy()
    else:
        rng = np.random.default_rng(seed)
        direction = rng.standard_normal(problem.op.n)
        direction /= problem.op.norm_h(direction)
        f_delta = problem.data + delta * direction
    q_delta = problem.op.apply_adjoint(f_delta)
    f_delta.flags.writeable = False
    q_delta.flags.writeable = False
    return NoisyData(f_delta=f_delta, delta=delta, seed=seed, q_delta=q_delta)


def minimal_norm_solution(op: DiscreteOperator, f, trunc_tol: float = 1e-12) -> np.ndarray:
    """Minimal-norm least-squares solution via the truncated SVD.

    Singular directions with s_j <= trunc_tol * s_1 are treated as
    null-space: u = sum over retained j of (f, psi_j)_h / s_j * phi_j.
    The result is orthogonal to all discarded directions, which is what
    makes its norm minimal among least-squares solutions.

    Raises
    ------
    DegenerateOperatorError
        If the operator is zero.
    """
    trunc_tol = check_unit_interval(trunc_tol, name="trunc_tol")
    f = as_vector(f, op.n, name="f")
    data = spectral(op)
    if data.norm <= 0.0:
        raise DegenerateOperatorError("zero operator has no minimal-norm solution")
    keep = data.s > trunc_tol * data.norm
    coeffs = data.left_coefficients(f)
    return data.right[:, keep] @ (coeffs[keep] / data.s[keep])


def stable_differentiate(f_delta_samples, delta: float, M: float, eval_points) -> np.ndarray:
    """Differentiate noisy samples with the noise-balanced central difference.

    Uses u_delta(x) = [f_delta(x + h) - f_delta(x - h)] / (2h) at the step
    h = sqrt(2 delta / M), which balances the discretization error M h / 2
    against the noise amplification delta / h.  When |f_delta - f| <= delta
    pointwise and |f''| <= M, the error is at most sqrt(2 M delta) at every
    admissible point.

    Parameters
    ----------
    f_delta_samples : callable x -> real
        Noisy data, evaluable anywhere in [0, 1].
    delta : float
        Pointwise noise bound (> 0).
    M : float
        Bound on |f''| (> 0); caller contract.
    eval_points : array
        Points inside [h, 1 - h].

    Raises
    ------
    OutOfDomainError
        If any evaluation point is within h of the boundary.
    """
    delta = check_positive(delta, name="delta")
    M = check_positive(M, name="M")
    pts = as_vector(eval_points, name="eval_points")
    h = math.sqrt(2.0 * delta / M)
    slack = 1e-12
    bad = (pts < h - slack) | (pts > 1.0 - h + slack)
    if np.any(bad):
        offender = float(pts[bad][0])
        raise OutOfDomainError(
            f"evaluation point {offender} is within h = {h:.6g} of the boundary"
        )
    values = np.empty_like(pts)
    for i, x in enumerate(pts):
        values[i] = (float(f_delta_samples(x + h)) - float(f_delta_samples(x - h))) / (
            2.0 * h
        )
    return values


@dataclass(frozen=True)
class HadamardRow:
    """One row of the Laplace-Cauchy instability table.

    For data phi_n(x) = A_n sin(n x) the harmonic extension is
    u(x, y) = (A_n / n) sin(n x) sinh(n y).  Primary columns use
    A_n = 1/n**2, for which the data vanish in C^1; the ``alt`` columns
    use A_n = 1/n, for which sup|phi'| stays at 1.
    """

    n: int
    sup_phi: float
    sup_dphi: float
    max_u: float
    sup_phi_alt: float
    sup_dphi_alt: float
    max_u_alt: float


def hadamard_instability_table(n_max: int, y_eval: float = 1.0) -> list[HadamardRow]:
    """Closed-form table exhibiting Hadamard instability of the Cauchy problem.

    As n grows the Cauchy data shrink (sup|phi| = 1/n**2, sup|phi'| = 1/n)
    while the solution at height ``y_eval`` blows up like sinh(n y)/n**3:
    arbitrarily small data produce arbitrarily large solutions, so the
    problem violates continuous dependence on the data.
    """
    n_max = int(n_max)
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    y_eval = check_positive(y_eval, name="y_eval")
    rows = []
    for n in range(1, n_max + 1):
        growth = math.sinh(n * y_eval)
        rows.append(
            HadamardRow(
                n=n,
                sup_phi=1.0 / n**2,
                sup_dphi=1.0 / n,
                max_u=growth / n**3,
                sup_phi_alt=1.0 / n,
                sup_dphi_alt=1.0,
                max_u_alt=growth / n**2,
            )
        )
    return rows
