"""Argument checks shared by the bound routines, estimator and CLI."""

from __future__ import annotations

import math

import numpy as np

SIDES = ("lower", "upper", "two")

_SIDE_ALIASES = {
    "lower": "lower",
    "lower-only": "lower",
    "upper": "upper",
    "upper-only": "upper",
    "two": "two",
    "two-sided": "two",
    "both": "two",
}


class InfeasibleError(ValueError):
    """Raised when a constraint set admits no probability vector."""


def check_delta(delta) -> float:
    try:
        delta = float(delta)
    except (TypeError, ValueError):
        raise ValueError(f"delta must be a real number, got {delta!r}") from None
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie strictly inside (0, 1), got {delta!r}")
    return delta


def check_side(side) -> str:
    try:
        return _SIDE_ALIASES[str(side).lower()]
    except KeyError:
        raise ValueError(
            f"side must be one of {', '.join(SIDES)}, got {side!r}"
        ) from None


def check_counts(counts) -> np.ndarray:
    arr = np.asarray(counts)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("counts must be a nonempty 1-d sequence")
    if arr.dtype.kind == "f":
        if not np.all(np.isfinite(arr)) or np.any(arr != np.round(arr)):
            raise ValueError("counts must be integers")
    elif arr.dtype.kind not in "iub":
        raise ValueError("counts must be integers")
    arr = arr.astype(np.int64)
    if np.any(arr < 0):
        raise ValueError("counts must be nonnegative")
    return arr


def check_values(values) -> np.ndarray:
    try:
        arr = np.asarray(values, dtype=float)
    except (TypeError, ValueError):
        raise ValueError("values must be real numbers") from None
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("values must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError("values must be finite")
    return arr


def check_probability_vector(p, atol: float = 1e-12) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("probabilities must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise ValueError("probabilities must be finite and nonnegative")
    if abs(math.fsum(arr) - 1.0) > atol:
        raise ValueError(f"probabilities must sum to 1, got {math.fsum(arr)!r}")
    return arr


def check_positive_int(x, name: str, minimum: int = 1) -> int:
    if isinstance(x, bool) or int(x) != x or x < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {x!r}")
    return int(x)
