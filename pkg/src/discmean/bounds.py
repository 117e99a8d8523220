"""Mean bounds for distributions supported on a known finite set of values.

Four methods share one output type, :class:`BoundInterval`:

* ``box``: per-category binomial inversion intervals joined by a union
  bound, maximized greedily over the simplex.
* ``nest``: lower bounds on nested cumulative probabilities
  ``p_1 + ... + p_i``; the maximizer is read off the thresholds.
* ``hoeffding`` and ``maurer-pontil``: range-only and empirical Bernstein
  baselines.

Lower bounds for box and nest come from running the upper-bound procedure
on the category order reversed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import (
    InfeasibleError,
    check_counts,
    check_delta,
    check_side,
    check_values,
)
from .binom import invert_lower, invert_upper

__all__ = [
    "CategorizedSample",
    "BoundInterval",
    "NestState",
    "METHODS",
    "normalize_sample",
    "sample_stats",
    "hoeffding_bounds",
    "maurer_pontil_bounds",
    "box_intervals",
    "box_maximize",
    "box_bounds",
    "nest_thresholds",
    "nest_eval",
    "nest_bounds",
]

METHODS = ("box", "nest", "hoeffding", "maurer-pontil")


@dataclass(frozen=True, eq=False)
class CategorizedSample:
    """Observed category counts with strictly increasing category values.

    Categories with zero count are kept: the support is known, and an
    unobserved top category still caps the upper bound.
    """

    counts: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        counts = check_counts(self.counts)
        values = check_values(self.values)
        if counts.shape != values.shape:
            raise ValueError(
                f"counts and values differ in length ({counts.size} != {values.size})"
            )
        if counts.size < 2:
            raise ValueError("at least two categories are required")
        if np.any(np.diff(values) <= 0):
            raise ValueError(
                "values must be strictly increasing; use normalize_sample for raw input"
            )
        if counts.sum() < 1:
            raise ValueError("total count must be positive")
        counts.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def m(self) -> int:
        return int(self.counts.size)

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / self.n

    def reflected(self) -> "CategorizedSample":
        """Sample of ``-X``: counts reversed, values negated and reversed."""
        return CategorizedSample(self.counts[::-1].copy(), -self.values[::-1])

    def __eq__(self, other):
        if not isinstance(other, CategorizedSample):
            return NotImplemented
        return np.array_equal(self.counts, other.counts) and np.array_equal(
            self.values, other.values
        )

    def __repr__(self):
        return (
            f"CategorizedSample(counts={self.counts.tolist()}, "
            f"values={self.values.tolist()})"
        )


@dataclass(frozen=True)
class BoundInterval:
    """Lower and upper bounds on the mean, valid with probability 1 - delta.

    For a one-sided bound the unused end sits at the edge of the support.
    """

    lower: float
    upper: float
    delta: float
    method: str
    side: str = "two"
    params: dict = field(default_factory=dict, compare=False)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, mean: float) -> bool:
        return self.lower <= mean <= self.upper


@dataclass(frozen=True, eq=False)
class NestState:
    """Thresholds ``t_0 .. t_m`` and the maximizer ``p_i = t_i - t_{i-1}``."""

    thresholds: np.ndarray
    maximizer: np.ndarray


def normalize_sample(raw_counts, raw_values) -> CategorizedSample:
    """Sort categories by value and merge duplicates by summing counts.

    Examples
    --------
    >>> normalize_sample([3, 2, 5], [1.0, 1.0, 2.0])
    CategorizedSample(counts=[5, 5], values=[1.0, 2.0])
    """
    counts = check_counts(raw_counts)
    values = check_values(raw_values)
    if counts.shape != values.shape:
        raise ValueError(
            f"counts and values differ in length ({counts.size} != {values.size})"
        )
    if counts.sum() < 1:
        raise ValueError("total count must be positive")
    uniq, inverse = np.unique(values, return_inverse=True)
    merged = np.zeros(uniq.size, dtype=np.int64)
    np.add.at(merged, inverse, counts)
    return CategorizedSample(merged, uniq)


def _dot(p, v) -> float:
    return math.fsum(np.multiply(p, v))


def _clamp(x: float, lo: float, hi: float) -> float:
    return min(max(x, lo), hi)


def sample_stats(s: CategorizedSample) -> tuple[float, float, float]:
    """Sample mean, unbiased sample variance and value range.

    Raises ``ValueError`` for ``n < 2``, where the variance is undefined.
    """
    n = s.n
    if n < 2:
        raise ValueError("sample variance needs at least two observations")
    mean = _dot(s.counts, s.values) / n
    var = math.fsum(s.counts * (s.values - mean) ** 2) / (n - 1)
    return mean, var, float(s.values[-1] - s.values[0])


def _sample_mean(s: CategorizedSample) -> float:
    return _dot(s.counts, s.values) / s.n


def _finish(s, lower, upper, delta, method, side, **params) -> BoundInterval:
    v1, vm = float(s.values[0]), float(s.values[-1])
    lower = _clamp(lower, v1, vm)
    upper = _clamp(upper, v1, vm)
    if side == "upper":
        lower = v1
    elif side == "lower":
        upper = vm
    return BoundInterval(lower, upper, delta, method, side, params)


def _one_sided_delta(delta, side):
    # The closed-form epsilons give simultaneous two-sided bounds; each
    # tail there gets delta/2, so a single tail may use 2*delta.
    return delta if side == "two" else min(2.0 * delta, 1.0 - 1e-16)


def hoeffding_bounds(s: CategorizedSample, delta: float, side: str = "two") -> BoundInterval:
    """Hoeffding interval ``mean +/- r * sqrt(ln(2/delta) / (2n))``."""
    delta = check_delta(delta)
    side = check_side(side)
    d = _one_sided_delta(delta, side)
    mean = _sample_mean(s)
    r = float(s.values[-1] - s.values[0])
    eps = r * math.sqrt(math.log(2.0 / d) / (2.0 * s.n))
    return _finish(s, mean - eps, mean + eps, delta, "hoeffding", side, epsilon=eps)


def maurer_pontil_bounds(
    s: CategorizedSample, delta: float, side: str = "two"
) -> BoundInterval:
    """Empirical Bernstein interval of Maurer and Pontil.

    ``eps = sqrt(2 var ln(4/delta) / n) + 7 r ln(4/delta) / (3 (n - 1))``
    """
    delta = check_delta(delta)
    side = check_side(side)
    d = _one_sided_delta(delta, side)
    mean, var, r = sample_stats(s)
    log_term = math.log(4.0 / d)
    eps = math.sqrt(2.0 * var * log_term / s.n) + 7.0 * r * log_term / (3.0 * (s.n - 1))
    return _finish(s, mean - eps, mean + eps, delta, "maurer-pontil", side, epsilon=eps)


def box_intervals(s: CategorizedSample, delta: float) -> np.ndarray:
    """Per-category probability intervals at budget ``delta / (2m)`` each.

    Returns an ``(m, 2)`` array of ``[lower, upper]`` rows.
    """
    delta = check_delta(delta)
    per = delta / (2 * s.m)
    n = s.n
    return np.array(
        [[invert_lower(n, int(k), per), invert_upper(n, int(k), per)] for k in s.counts]
    )


def box_maximize(intervals, values) -> tuple[np.ndarray, float]:
    """Maximize ``p . v`` over the box intersected with the simplex.

    Every ``p_i`` starts at its lower end; the remaining headroom is then
    handed out from the last category backward. With ``values`` ascending
    this maximizes the mean, with ``values`` descending it minimizes it.
    """
    intervals = np.asarray(intervals, dtype=float)
    values = np.asarray(values, dtype=float)
    if intervals.ndim != 2 or intervals.shape[1] != 2 or intervals.shape[0] != values.size:
        raise ValueError("intervals must have shape (m, 2) matching values")
    lowers, uppers = intervals[:, 0], intervals[:, 1]
    if np.any(lowers > uppers):
        raise ValueError("each interval needs lower <= upper")
    if math.fsum(lowers) > 1.0 + 1e-12 or math.fsum(uppers) < 1.0 - 1e-12:
        raise InfeasibleError("box does not intersect the probability simplex")
    p = lowers.copy()
    headroom = 1.0 - math.fsum(p)
    for i in range(p.size - 1, -1, -1):
        if headroom <= 0.0:
            break
        add = min(headroom, uppers[i] - lowers[i])
        p[i] += add
        headroom = 1.0 - math.fsum(p)
    return p, _dot(p, values)


def box_bounds(s: CategorizedSample, delta: float, side: str = "two") -> BoundInterval:
    """Bonferroni box bound.

    Both ends come from the same ``2m`` basis intervals, so a two-sided
    interval costs no more budget than a one-sided one.
    """
    delta = check_delta(delta)
    side = check_side(side)
    box = box_intervals(s, delta)
    _, upper = box_maximize(box, s.values)
    _, lower = box_maximize(box[::-1], s.values[::-1])
    return _finish(s, lower, upper, delta, "box", side)


def nest_thresholds(counts, per_bound_delta: float) -> np.ndarray:
    """Cumulative-probability lower bounds ``t_0 = 0, t_1, ..., t_m = 1``."""
    counts = check_counts(counts)
    per_bound_delta = check_delta(per_bound_delta)
    n = int(counts.sum())
    if n < 1:
        raise ValueError("total count must be positive")
    cum = np.cumsum(counts)
    t = np.empty(counts.size + 1)
    t[0] = 0.0
    t[1:-1] = [invert_lower(n, int(c), per_bound_delta) for c in cum[:-1]]
    t[-1] = 1.0
    return t


def nest_eval(counts, values, per_bound_delta: float) -> tuple[NestState, float]:
    """Nest maximizer and its value ``sum_i (t_i - t_{i-1}) v_i``.

    ``values`` may be descending, which turns the maximum into the
    minimum over the reversed nest.
    """
    values = check_values(values)
    t = nest_thresholds(counts, per_bound_delta)
    if t.size != values.size + 1:
        raise ValueError("counts and values differ in length")
    p = np.diff(t)
    return NestState(t, p), _dot(p, values)


def nest_bounds(s: CategorizedSample, delta: float, side: str = "two") -> BoundInterval:
    """Bonferroni nest bound.

    One-sided bounds spend ``delta / (m - 1)`` per threshold; two-sided
    bounds run each side at ``delta / 2``.
    """
    delta = check_delta(delta)
    side = check_side(side)
    side_delta = delta / 2.0 if side == "two" else delta
    per = side_delta / (s.m - 1)
    upper = lower = None
    if side in ("upper", "two"):
        _, upper = nest_eval(s.counts, s.values, per)
    if side in ("lower", "two"):
        _, lower = nest_eval(s.counts[::-1], s.values[::-1], per)
    v1, vm = float(s.values[0]), float(s.values[-1])
    return _finish(
        s,
        v1 if lower is None else lower,
        vm if upper is None else upper,
        delta,
        "nest",
        side,
    )
