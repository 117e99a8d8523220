"""Two ways to spend less of the failure budget on nest bounds.

Merging collapses runs of neighbouring categories into one category that
takes the worst-case value of its run. Fewer categories means fewer
thresholds to split delta over. The merge plan minimizes the largest
value range inside any run.

Nearly uniform bounds let up to ``a`` of the ``m - 1`` threshold bounds
fail. Each threshold can then use ``(a + 1) delta / (m - 1)``, and the
bound is widened by the worst mass shift those failures allow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_delta, check_side, check_values
from .bounds import (
    BoundInterval,
    CategorizedSample,
    _finish,
    nest_bounds,
    nest_eval,
)

__all__ = [
    "Clustering",
    "NuCorrection",
    "merge_table",
    "merge_plan",
    "apply_merge",
    "merged_nest_bounds",
    "nu_delta",
    "nu_correction",
    "nearly_uniform_nest_bounds",
]


@dataclass(frozen=True)
class Clustering:
    """Partition of categories ``0 .. m-1`` into contiguous runs.

    ``starts[c]`` is the first category of run ``c``; ``starts[0] == 0``.
    """

    starts: tuple
    m: int
    max_range: float

    def __post_init__(self):
        starts = tuple(int(s) for s in self.starts)
        if not starts or starts[0] != 0:
            raise ValueError("the first cluster must start at category 0")
        if any(b <= a for a, b in zip(starts, starts[1:])) or starts[-1] >= self.m:
            raise ValueError("cluster starts must be strictly increasing and < m")
        object.__setattr__(self, "starts", starts)

    @property
    def cluster_count(self) -> int:
        return len(self.starts)

    @property
    def bounds(self) -> list[tuple[int, int]]:
        """Inclusive ``(first, last)`` category index of each run."""
        ends = list(self.starts[1:]) + [self.m]
        return [(a, b - 1) for a, b in zip(self.starts, ends)]

    @property
    def sizes(self) -> list[int]:
        return [b - a + 1 for a, b in self.bounds]

    def labels(self) -> np.ndarray:
        """Cluster index of each category."""
        out = np.zeros(self.m, dtype=int)
        for c, s in enumerate(self.starts[1:], start=1):
            out[s:] = c
        return out


@dataclass(frozen=True, eq=False)
class NuCorrection:
    allowed_failures: int
    table: np.ndarray
    correction: float


def merge_table(values, h: int) -> np.ndarray:
    """DP table ``c[g, j]``: least achievable max range over ``g`` runs of
    the first ``j`` categories (``inf`` where ``j < g``)."""
    v = check_values(values)
    m = v.size
    if isinstance(h, bool) or int(h) != h or not 1 <= h <= m:
        raise ValueError(f"h must be an integer in [1, {m}], got {h!r}")
    h = int(h)
    c = np.full((h + 1, m + 1), np.inf)
    c[1, 1:] = v - v[0]
    for g in range(2, h + 1):
        for j in range(g, m + 1):
            # last run is categories i+1..j (1-based), i.e. v[i] .. v[j-1]
            i = np.arange(g - 1, j)
            c[g, j] = np.min(np.maximum(c[g - 1, i], v[j - 1] - v[i]))
    return c


def merge_plan(values, h: int) -> Clustering:
    """Contiguous clustering into ``h`` runs minimizing the largest run range.

    Recovery walks back from the last category and, among optimal split
    points, takes the smallest one.
    """
    v = check_values(values)
    if np.any(np.diff(v) <= 0):
        raise ValueError("values must be strictly increasing")
    c = merge_table(v, h)
    m = v.size
    starts = []
    j = m
    for g in range(int(h), 1, -1):
        i = np.arange(g - 1, j)
        scores = np.maximum(c[g - 1, i], v[j - 1] - v[i])
        split = int(i[np.flatnonzero(scores == c[g, j])[0]])
        starts.append(split)
        j = split
    starts.append(0)
    return Clustering(tuple(reversed(starts)), m, float(c[int(h), m]))


def apply_merge(s: CategorizedSample, c: Clustering, direction: str = "upper") -> CategorizedSample:
    """Sum counts within each run and give the run its worst-case value.

    ``direction="upper"`` uses the run maximum, ``"lower"`` the minimum.
    """
    if c.m != s.m:
        raise ValueError(f"clustering covers {c.m} categories, sample has {s.m}")
    if direction not in ("upper", "lower"):
        raise ValueError(f"direction must be 'upper' or 'lower', got {direction!r}")
    starts = np.asarray(c.starts)
    counts = np.add.reduceat(s.counts, starts)
    pick = starts if direction == "lower" else np.append(starts[1:], s.m) - 1
    values = s.values[pick]
    if counts.size < 2:
        raise ValueError("merging into a single category leaves nothing to bound")
    return CategorizedSample(counts, values)


def merged_nest_bounds(
    s: CategorizedSample, delta: float, h: int, side: str = "two"
) -> BoundInterval:
    """Nest bound computed on a sample merged down to ``h`` categories.

    The upper end uses run maxima, the lower end run minima; both use the
    same plan since it depends on values only.
    """
    delta = check_delta(delta)
    side = check_side(side)
    if isinstance(h, bool) or int(h) != h or not 2 <= h <= s.m:
        raise ValueError(f"h must be an integer in [2, {s.m}], got {h!r}")
    plan = merge_plan(s.values, int(h))
    side_delta = delta / 2.0 if side == "two" else delta
    lower, upper = float(s.values[0]), float(s.values[-1])
    if side in ("upper", "two"):
        upper = nest_bounds(apply_merge(s, plan, "upper"), side_delta, "upper").upper
    if side in ("lower", "two"):
        lower = nest_bounds(apply_merge(s, plan, "lower"), side_delta, "lower").lower
    return _finish(
        s, lower, upper, delta, "merged-nest", side, h=int(h), max_range=plan.max_range
    )


def nu_delta(h: int, i: int, p, values) -> float:
    """Bound increase when the ``h`` thresholds just before threshold ``i`` fail.

    ``sum_{b=1..h} p_{i-b} (v_i - v_{i-b})``, with 1-based category index
    ``i`` as in the usual statement of the nest.
    """
    p = np.asarray(p, dtype=float)
    v = np.asarray(values, dtype=float)
    m = p.size
    if v.size != m:
        raise ValueError("p and values differ in length")
    if not (0 <= h < i <= m):
        raise ValueError(f"need 0 <= h < i <= m={m}, got h={h}, i={i}")
    if h == 0:
        return 0.0
    # 1-based i-b for b = 1..h is 0-based i-1-b
    idx = np.arange(i - 1 - h, i - 1)
    return math.fsum(p[idx] * (v[i - 1] - v[idx]))


def nu_correction(p, values, a: int) -> NuCorrection:
    """Worst-case bound increase from at most ``a`` failed thresholds.

    ``table[i, j]`` is the largest increase from exactly ``j`` failures
    among thresholds ``1 .. i-1`` while threshold ``i`` holds (``i = m``
    always holds). Infeasible states are ``-inf``; ``table[i, 0] = 0``.
    """
    p = np.asarray(p, dtype=float)
    v = np.asarray(values, dtype=float)
    m = p.size
    if v.size != m:
        raise ValueError("p and values differ in length")
    if isinstance(a, bool) or int(a) != a or not 0 <= a <= m - 2:
        raise ValueError(f"a must be an integer in [0, {m - 2}], got {a!r}")
    a = int(a)
    # deltas[h, i] for 1-based i, h < i
    deltas = np.full((a + 1, m + 1), -np.inf)
    for i in range(1, m + 1):
        for h in range(0, min(a, i - 1) + 1):
            deltas[h, i] = nu_delta(h, i, p, v)
    table = np.full((m + 1, a + 1), -np.inf)
    table[0, 0] = 0.0
    for i in range(1, m + 1):
        table[i, 0] = 0.0
        for j in range(1, min(a, i - 1) + 1):
            best = -np.inf
            for h in range(0, j + 1):
                prev = table[i - 1 - h, j - h]
                if prev == -np.inf:
                    continue
                best = max(best, prev + deltas[h, i])
            table[i, j] = best
    correction = float(table[m, a])
    return NuCorrection(a, table, max(correction, 0.0))


def nearly_uniform_nest_bounds(
    s: CategorizedSample, delta: float, a: int, side: str = "two"
) -> BoundInterval:
    """Nest bound allowing ``a`` threshold failures.

    Thresholds use ``(a + 1) * side_delta / (m - 1)``; the upper end adds the
    correction, the lower end subtracts it (computed on the reversed nest
    with negated values). ``a = 0`` is the plain nest bound.
    """
    delta = check_delta(delta)
    side = check_side(side)
    m = s.m
    if isinstance(a, bool) or int(a) != a or not 0 <= a <= m - 2:
        raise ValueError(f"a must be an integer in [0, {m - 2}], got {a!r}")
    a = int(a)
    side_delta = delta / 2.0 if side == "two" else delta
    per = min((a + 1) * side_delta / (m - 1), 1.0 - 1e-16)
    lower, upper = float(s.values[0]), float(s.values[-1])
    if side in ("upper", "two"):
        state, base = nest_eval(s.counts, s.values, per)
        upper = base + nu_correction(state.maximizer, s.values, a).correction
    if side in ("lower", "two"):
        rv = s.values[::-1]
        state, base = nest_eval(s.counts[::-1], rv, per)
        lower = base - nu_correction(state.maximizer, -rv, a).correction
    return _finish(s, lower, upper, delta, "nearly-uniform", side, a=a)
