"""Discrete linear operators on [0, 1] with the weighted L2 geometry.

Functions on the interval are represented by their values at the midpoint
nodes x_i = (i - 1/2)h, h = 1/n, and inner products carry the quadrature
weight h: (u, v)_h = h * sum(u_i v_i).  Because the weight is uniform, the
h-adjoint of a matrix is its plain transpose and the h-operator norm of A
equals its spectral 2-norm, so dense LAPACK routines apply unchanged; only
the singular *vectors* need the 1/sqrt(h) rescaling to be h-orthonormal.

Everything here is dense and desk-scale (n up to a few hundred): the
ill-posedness of the canonical operators is already severe there.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np
import scipy.linalg

from .errors import DegenerateOperatorError, InvalidKernelError, NumericalError
from .validation import as_vector, check_positive

__all__ = [
    "Grid",
    "DiscreteOperator",
    "SpectralData",
    "dirichlet_green_kernel",
    "build_integration_operator",
    "build_fredholm_operator",
    "spectral",
    "scale_to_unit",
    "resolvent_solve",
]


class Grid:
    """Uniform midpoint grid on [0, 1] carrying the weighted inner product."""

    __slots__ = ("n", "h", "nodes")

    def __init__(self, n: int):
        n = int(n)
        if n < 1:
            raise ValueError(f"grid size must be at least 1, got {n}")
        self.n = n
        self.h = 1.0 / n
        nodes = (np.arange(n) + 0.5) * self.h
        nodes.flags.writeable = False
        self.nodes = nodes

    def inner(self, u, v) -> float:
        """Weighted inner product (u, v)_h = h * sum(u_i v_i)."""
        return self.h * float(np.dot(u, v))

    def norm(self, u) -> float:
        """Weighted norm ||u||_h = sqrt(h) * ||u||_2."""
        return math.sqrt(self.h) * float(np.linalg.norm(u))

    def __repr__(self) -> str:
        return f"Grid(n={self.n})"


class DiscreteOperator:
    """Dense n-by-n operator between weighted spaces on one grid.

    With the uniform weight the adjoint is the matrix transpose, and the
    Gram operator B = A*A is the plain matrix product A.T @ A.  Spectral
    data and the Gram matrix are computed lazily and cached; instances are
    treated as immutable after construction (the arrays are marked
    read-only), so concurrent read-only use is safe.
    """

    __slots__ = ("grid", "matrix", "_spectral", "_gram")

    def __init__(self, grid: Grid, matrix):
        matrix = np.array(matrix, dtype=float)
        if matrix.shape != (grid.n, grid.n):
            raise ValueError(
                f"matrix shape {matrix.shape} does not match grid size {grid.n}"
            )
        if not np.all(np.isfinite(matrix)):
            raise ValueError("operator matrix contains non-finite entries")
        matrix.flags.writeable = False
        self.grid = grid
        self.matrix = matrix
        self._spectral = None
        self._gram = None

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def h(self) -> float:
        return self.grid.h

    def apply(self, u) -> np.ndarray:
        """A u."""
        return self.matrix @ u

    def apply_adjoint(self, v) -> np.ndarray:
        """A* v (matrix transpose under the uniform weight)."""
        return self.matrix.T @ v

    def gram(self) -> np.ndarray:
        """Gram matrix B = A* A, cached."""
        if self._gram is None:
            gram = self.matrix.T @ self.matrix
            gram.flags.writeable = False
            self._gram = gram
        return self._gram

    def norm_h(self, u) -> float:
        return self.grid.norm(u)

    def inner_h(self, u, v) -> float:
        return self.grid.inner(u, v)

    def __repr__(self) -> str:
        return f"DiscreteOperator(n={self.n})"


@dataclass(frozen=True)
class SpectralData:
    """Singular value decomposition of an operator in the weighted geometry.

    ``s`` holds the s-values in descending order (they coincide with the
    matrix singular values); the columns of ``left``/``right`` are the
    h-orthonormal singular vectors psi_j, phi_j, i.e. the matrix singular
    vectors divided by sqrt(h).  The eigenvalues of B = A*A are s**2 with
    eigenvectors phi_j, which is the discrete resolution of the identity.
    """

    s: np.ndarray
    left: np.ndarray
    right: np.ndarray
    h: float

    @property
    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues of the Gram operator B = A*A."""
        return self.s**2

    @property
    def norm(self) -> float:
        """Operator norm ||A|| = s_1."""
        return float(self.s[0])

    def left_coefficients(self, f) -> np.ndarray:
        """Expansion coefficients (f, psi_j)_h for all j."""
        return self.h * (self.left.T @ f)


def dirichlet_green_kernel(x, y):
    """Green's function min(x, y) - x*y of -u'' with zero boundary values.

    Default Fredholm demo kernel: its eigenpairs are known in closed form
    (eigenvalues 1/(k*pi)**2, eigenfunctions sqrt(2)*sin(k*pi*x)), which
    supplies a free oracle for the discretization.
    """
    return np.minimum(x, y) - x * y


def build_integration_operator(n: int) -> DiscreteOperator:
    """Discretize Au(x) = integral of u from 0 to x on the midpoint grid.

    Left-rectangle composite quadrature gives the lower-triangular matrix
    A_ij = h for j <= i, so (A 1)_i = i*h exactly and the matrix is
    injective (all diagonal entries are h > 0).  Inverting it amounts to
    numerical differentiation, the canonical mildly ill-posed problem.
    """
    grid = Grid(n)
    matrix = grid.h * np.tril(np.ones((grid.n, grid.n)))
    return DiscreteOperator(grid, matrix)


def build_fredholm_operator(kernel=None, n: int = 64) -> DiscreteOperator:
    """Discretize the Fredholm first-kind operator with the given kernel.

    Parameters
    ----------
    kernel : callable (x, y) -> real, optional
        Square-integrable kernel on [0, 1]^2; must be finite at the grid
        nodes.  Defaults to :func:`dirichlet_green_kernel`.
    n : int
        Grid size.

    Returns
    -------
    DiscreteOperator
        Matrix A_ij = h * K(x_i, x_j); symmetric whenever the kernel is.
    """
    if kernel is None:
        kernel = dirichlet_green_kernel
    grid = Grid(n)
    xi = grid.nodes[:, None]
    yj = grid.nodes[None, :]
    try:
        values = np.asarray(kernel(xi, yj), dtype=float)
        if values.shape != (grid.n, grid.n):
            raise ValueError
    except (TypeError, ValueError):
        # Kernel is not vectorized; sample it pointwise.
        values = np.array(
            [[kernel(x, y) for y in grid.nodes] for x in grid.nodes], dtype=float
        )
    if not np.all(np.isfinite(values)):
        raise InvalidKernelError("kernel produced non-finite values on the grid")
    return DiscreteOperator(grid, grid.h * values)


def spectral(op: DiscreteOperator) -> SpectralData:
    """Singular triplets of ``op`` in the weighted geometry, cached per operator.

    Raises
    ------
    NumericalError
        If the decomposition fails to converge; the message carries matrix
        size and norm diagnostics.
    """
    if op._spectral is not None:
        return op._spectral
    try:
        u, sigma, vt = np.linalg.svd(op.matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"SVD failed for operator n={op.n}, "
            f"fro-norm={np.linalg.norm(op.matrix):.3e}: {exc}"
        ) from exc
    root_h = math.sqrt(op.h)
    data = SpectralData(s=sigma, left=u / root_h, right=vt.T / root_h, h=op.h)
    for arr in (data.s, data.left, data.right):
        arr.flags.writeable = False
    op._spectral = data
    return data


def scale_to_unit(op: DiscreteOperator) -> tuple[DiscreteOperator, float]:
    """Rescale so the operator norm is 1; returns (scaled operator, s_1).

    Solving with the scaled pair (A/s_1, f/s_1) yields the same solution
    set as (A, f).  The scaling divides by s_1 unconditionally, also when
    the norm is already <= 1, so behavior is uniform.

    Raises
    ------
    DegenerateOperatorError
        If the operator is zero (s_1 = 0).
    """
    data = spectral(op)
    s1 = data.norm
    if s1 <= 0.0:
        raise DegenerateOperatorError("cannot rescale a zero operator")
    scaled = DiscreteOperator(op.grid, op.matrix / s1)
    # The singular vectors are unchanged; reuse them instead of a second SVD.
    scaled._spectral = SpectralData(
        s=data.s / s1, left=data.left, right=data.right, h=data.h
    )
    scaled._spectral.s.flags.writeable = False
    return scaled, s1


def _shifted_spd_solve(op: DiscreteOperator, shift: float, rhs: np.ndarray) -> np.ndarray:
    """Solve (B + shift) u = rhs by Cholesky with iterative refinement.

    ``shift`` may be 0 when B itself is positive definite.  Refinement runs
    until the residual is below 1e-12 * ||rhs|| or stagnates, which keeps the
    resolvent contract (1e-10) with a wide margin on well-posed shifts.
    """
    gram = op.gram()
    shifted = gram + shift * np.eye(op.n)
    try:
        factor = scipy.linalg.cho_factor(shifted, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise NumericalError(
            f"Cholesky factorization failed for B + {shift:.3e} (n={op.n})"
        ) from exc
    u = scipy.linalg.cho_solve(factor, rhs, check_finite=False)
    rhs_norm = float(np.linalg.norm(rhs))
    if rhs_norm == 0.0:
        return np.zeros_like(rhs)
    previous = math.inf
    for _ in range(5):
        residual = rhs - (gram @ u + shift * u)
        res_norm = float(np.linalg.norm(residual))
        if res_norm <= 1e-12 * rhs_norm or res_norm >= 0.5 * previous:
            break
        u = u + scipy.linalg.cho_solve(factor, residual, check_finite=False)
        previous = res_norm
    return u


def resolvent_solve(op: DiscreteOperator, alpha: float, rhs) -> np.ndarray:
    """Solve (B + alpha) u = rhs for the Gram operator B = A*A.

    B + alpha is symmetric positive definite for alpha > 0, with
    ||(B + alpha)^{-1}|| <= 1/alpha; the solve uses a Cholesky
    factorization refreshed per call (alpha changes between calls in all
    hot loops) plus iterative refinement so that the residual satisfies
    ||(B + alpha) u - rhs||_h <= 1e-10 * ||rhs||_h.

    Raises
    ------
    ValueError
        If alpha <= 0.
    """
    alpha = check_positive(alpha, name="alpha")
    rhs = as_vector(rhs, op.n, name="rhs")
    return _shifted_spd_solve(op, alpha, rhs)
