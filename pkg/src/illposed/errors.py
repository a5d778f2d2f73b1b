"""Exception types shared across the package.

Invalid arguments (wrong sign, wrong range, wrong shape) raise the builtin
``ValueError``; the classes below cover failures that carry domain meaning
and that callers may want to catch selectively, e.g. the sweep harness maps
them to status columns instead of aborting.
"""

from __future__ import annotations

__all__ = [
    "IllposedError",
    "DegenerateOperatorError",
    "InvalidKernelError",
    "NumericalError",
    "NoiseDominatesDataError",
    "NoRootError",
    "OutOfDomainError",
    "ConfigError",
]


class IllposedError(Exception):
    """Base class for all package-specific failures."""


class DegenerateOperatorError(IllposedError):
    """The operator has no usable spectral content (largest s-value is zero)."""


class InvalidKernelError(IllposedError):
    """A kernel function produced non-finite values on the grid."""


class NumericalError(IllposedError):
    """A linear-algebra routine failed or produced a non-finite state."""


class NoiseDominatesDataError(IllposedError):
    """Discrepancy target C*delta is at or above the data norm ||f_delta||."""


class NoRootError(IllposedError):
    """A monotone root-finding problem has no root in the admissible range."""


class OutOfDomainError(IllposedError):
    """An evaluation point falls outside the admissible interval."""


class ConfigError(IllposedError):
    """A sweep configuration is malformed or references unknown names."""
