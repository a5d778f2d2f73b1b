"""Input validation helpers used by the public entry points."""

from __future__ import annotations

import numpy as np

__all__ = ["as_vector", "check_positive", "check_unit_interval"]


def as_vector(x, n: int | None = None, *, name: str = "x") -> np.ndarray:
    """Coerce ``x`` to a finite 1-D float64 array, optionally of length ``n``."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise ValueError(f"{name} must have length {n}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_positive(value, *, name: str) -> float:
    """Return ``value`` as float, requiring it to be finite and > 0."""
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def check_unit_interval(value, *, name: str) -> float:
    """Return ``value`` as float, requiring 0 < value < 1."""
    value = float(value)
    if not (0.0 < value < 1.0):
        raise ValueError(f"{name} must lie in the open interval (0, 1), got {value}")
    return value
