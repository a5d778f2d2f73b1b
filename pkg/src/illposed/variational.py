"""Tikhonov regularization with a-priori and discrepancy parameter rules.

The regularized solution u_alpha = (B + alpha)^{-1} A* f_delta is the unique
minimizer of ||A u - f_delta||_h^2 + alpha ||u||_h^2 and, spectrally, the
filtered expansion sum_j s_j/(s_j^2 + alpha) (f_delta, psi_j)_h phi_j.  The
solver goes through the SPD resolvent (cheap, factorization per call); the
filter form is reserved for test oracles.

Morozov's principle picks alpha as the root of the residual equation
||A u_alpha - f_delta||_h = C delta with C > 1.  The squared residual is a
monotone increasing function of alpha, so bisection on log10(alpha) is
unconditionally convergent; Newton steps are avoided because the residual
can be extremely flat near alpha = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NoiseDominatesDataError, NoRootError
from .linops import DiscreteOperator, resolvent_solve
from .validation import as_vector, check_positive, check_unit_interval

__all__ = [
    "AlphaRule",
    "MorozovResult",
    "tikhonov_solve",
    "tikhonov_residual",
    "apriori_alpha",
    "morozov_alpha",
]

DEFAULT_APRIORI_EXPONENT = 2.0 / 3.0
DEFAULT_MOROZOV_C = 1.5

_LOG_ALPHA_LO = -14.0
_LOG_ALPHA_HI = 4.0
_MAX_BISECTIONS = 200


@dataclass(frozen=True)
class AlphaRule:
    """Parameter-choice rule for the regularization weight alpha.

    ``kind`` is one of ``apriori`` (alpha = delta**exponent, exponent in
    (0, 1)), ``morozov`` (residual root with constant C > 1), or ``fixed``
    (explicit alpha > 0).  Construct via the classmethods so the relevant
    field is validated.
    """

    kind: str
    exponent: float = DEFAULT_APRIORI_EXPONENT
    C: float = DEFAULT_MOROZOV_C
    alpha: float = 0.0

    @classmethod
    def apriori(cls, exponent: float = DEFAULT_APRIORI_EXPONENT) -> "AlphaRule":
        return cls(kind="apriori", exponent=check_unit_interval(exponent, name="exponent"))

    @classmethod
    def morozov(cls, C: float = DEFAULT_MOROZOV_C) -> "AlphaRule":
        C = float(C)
        if not C > 1.0:
            raise ValueError(f"Morozov constant must exceed 1, got {C}")
        return cls(kind="morozov", C=C)

    @classmethod
    def fixed(cls, alpha: float) -> "AlphaRule":
        return cls(kind="fixed", alpha=check_positive(alpha, name="alpha"))


class MorozovResult(NamedTuple):
    """Chosen alpha together with the residual it achieves."""

    alpha: float
    residual: float


def tikhonov_solve(op: DiscreteOperator, f_delta, alpha: float) -> np.ndarray:
    """Minimize ||A u - f_delta||_h^2 + alpha ||u||_h^2.

    Returns (B + alpha)^{-1} A* f_delta, the unique minimizer; it agrees
    with the SVD filter expansion to 1e-10 relative.

    Raises
    ------
    ValueError
        If alpha <= 0.
    """
    f_delta = as_vector(f_delta, op.n, name="f_delta")
    return resolvent_solve(op, alpha, op.apply_adjoint(f_delta))


def apriori_alpha(delta: float, exponent: float = DEFAULT_APRIORI_EXPONENT) -> float:
    """A-priori rule alpha = delta**exponent with exponent in (0, 1).

    The exponent range guarantees both alpha(delta) -> 0 and
    delta/alpha(delta) = delta**(1 - exponent) -> 0 as delta -> 0, the two
    limits an a-priori choice needs for the regularized solutions to
    converge.
    """
    delta = check_positive(delta, name="delta")
    exponent = check_unit_interval(exponent, name="exponent")
    return delta**exponent


def tikhonov_residual(op: DiscreteOperator, f_delta, alpha: float) -> float:
    """Discrepancy ||A u_alpha - f_delta||_h of the Tikhonov solution."""
    u = tikhonov_solve(op, f_delta, alpha)
    return op.norm_h(op.apply(u) - f_delta)


def morozov_alpha(
    op: DiscreteOperator,
    f_delta,
    delta: float,
    C: float = DEFAULT_MOROZOV_C,
) -> MorozovResult:
    """Choose alpha from the discrepancy principle ||A u_alpha - f_delta|| = C delta.

    Bisects log10(alpha) over [-14, 4], stopping once the residual matches
    C*delta to 1e-10 relative or after 200 halvings (the residual is
    monotone increasing in alpha, so the root is unique).

    Raises
    ------
    NoiseDominatesDataError
        If ||f_delta||_h <= C*delta: the noise budget swallows the data and
        u = 0 already satisfies the discrepancy, so no positive root exists.
    NoRootError
        If the residual at alpha = 1e-14 still exceeds C*delta: the data are
        not approximately attainable and the residual never dips to target.
    """
    f_delta = as_vector(f_delta, op.n, name="f_delta")
    delta = check_positive(delta, name="delta")
    C = float(C)
    if not C > 1.0:
        raise ValueError(f"Morozov constant must exceed 1, got {C}")
    target = C * delta
    if op.norm_h(f_delta) <= target:
        raise NoiseDominatesDataError(
            f"||f_delta||_h = {op.norm_h(f_delta):.6g} <= C*delta = {target:.6g}"
        )
    if tikhonov_residual(op, f_delta, 10.0**_LOG_ALPHA_LO) > target:
        raise NoRootError(
            f"residual floor at alpha = 1e-14 exceeds C*delta = {target:.6g}"
        )
    lo, hi = _LOG_ALPHA_LO, _LOG_ALPHA_HI
    alpha = 10.0 ** (0.5 * (lo + hi))
    residual = tikhonov_residual(op, f_delta, alpha)
    for _ in range(_MAX_BISECTIONS):
        if abs(residual - target) <= 1e-10 * target:
            break
        if residual < target:
            lo = np.log10(alpha)
        else:
            hi = np.log10(alpha)
        alpha = 10.0 ** (0.5 * (lo + hi))
        residual = tikhonov_residual(op, f_delta, alpha)
    return MorozovResult(alpha=float(alpha), residual=float(residual))
