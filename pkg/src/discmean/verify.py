"""Monte Carlo coverage checks and brute-force oracles for small instances."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from ._validation import (
    InfeasibleError,
    check_delta,
    check_positive_int,
    check_probability_vector,
    check_values,
)
from .bounds import CategorizedSample
from .methods import MethodConfig

__all__ = [
    "TrueDistribution",
    "CoverageReport",
    "ConstraintSet",
    "trial_rng",
    "sample_multinomial",
    "coverage_estimate",
    "coverage_threshold",
    "brute_force_max_mean",
    "brute_force_merge",
    "brute_force_nu_correction",
]


@dataclass(frozen=True, eq=False)
class TrueDistribution:
    probabilities: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        p = check_probability_vector(self.probabilities)
        v = check_values(self.values)
        if p.size != v.size:
            raise ValueError("probabilities and values differ in length")
        if np.any(np.diff(v) <= 0):
            raise ValueError("values must be strictly increasing")
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "values", v)

    @classmethod
    def uniform(cls, values) -> "TrueDistribution":
        v = check_values(values)
        return cls(np.full(v.size, 1.0 / v.size), v)

    @property
    def m(self) -> int:
        return int(self.values.size)

    @property
    def true_mean(self) -> float:
        mean = math.fsum(self.probabilities * self.values)
        return min(max(mean, float(self.values[0])), float(self.values[-1]))


def coverage_threshold(delta: float, trials: int) -> float:
    """Largest failure rate consistent with ``delta`` at three standard errors."""
    return delta + 3.0 * math.sqrt(delta * (1.0 - delta) / trials)


@dataclass(frozen=True)
class CoverageReport:
    trials: int
    failures: int
    failure_rate: float
    delta: float
    method: str
    seed: int
    n: int = 0
    true_mean: float = float("nan")
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def threshold(self) -> float:
        return coverage_threshold(self.delta, self.trials)

    @property
    def passed(self) -> bool:
        return self.failure_rate <= self.threshold


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream for one trial, derived from ``(seed, trial)`` only."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(trial)]))


def sample_multinomial(n: int, d: TrueDistribution, rng: np.random.Generator) -> np.ndarray:
    """Multinomial(n, p) counts by sequential binomial splitting.

    Category ``i`` receives ``Binomial(remaining, p_i / remaining_mass)``.
    """
    n = check_positive_int(n, "n")
    p = d.probabilities
    counts = np.zeros(p.size, dtype=np.int64)
    remaining = n
    # tail masses, summed from the right so the last ratio is exactly 1
    mass = np.cumsum(p[::-1])[::-1]
    for i in range(p.size - 1):
        if remaining == 0:
            break
        if mass[i] <= 0.0:
            break
        ratio = min(max(p[i] / mass[i], 0.0), 1.0)
        k = int(rng.binomial(remaining, ratio))
        counts[i] = k
        remaining -= k
    else:
        counts[-1] = remaining
        remaining = 0
    if remaining:
        # leftover mass numerically zero; give it to the last positive category
        counts[np.flatnonzero(p > 0)[-1]] += remaining
    return counts


def coverage_estimate(
    config: MethodConfig,
    d: TrueDistribution,
    n: int,
    delta: float,
    trials: int,
    seed: int = 0,
) -> CoverageReport:
    """Fraction of seeded trials whose bound misses the true mean.

    A miss is the true mean strictly above the upper end or strictly below
    the lower end, restricted to the ends the configured side provides.
    """
    if not isinstance(config, MethodConfig):
        raise ValueError("config must be a MethodConfig")
    n = check_positive_int(n, "n")
    trials = check_positive_int(trials, "trials")
    delta = check_delta(delta)
    seed = int(seed)
    mu = d.true_mean
    check_up = config.side in ("upper", "two")
    check_low = config.side in ("lower", "two")
    cache: dict[bytes, bool] = {}
    failures = 0
    for t in range(trials):
        counts = sample_multinomial(n, d, trial_rng(seed, t))
        key = counts.tobytes()
        miss = cache.get(key)
        if miss is None:
            b = config.compute(CategorizedSample(counts, d.values), delta)
            miss = (check_up and mu > b.upper) or (check_low and mu < b.lower)
            cache[key] = miss
        failures += miss
    return CoverageReport(
        trials=trials,
        failures=int(failures),
        failure_rate=failures / trials,
        delta=delta,
        method=config.describe(),
        seed=seed,
        n=n,
        true_mean=mu,
    )


@dataclass(frozen=True, eq=False)
class ConstraintSet:
    """Linear constraints on a probability vector.

    ``lower``/``upper`` bound each ``p_i``; ``cumulative`` holds thresholds
    ``t_0 .. t_m`` with ``p_1 + ... + p_i >= t_i``.
    """

    lower: np.ndarray | None = None
    upper: np.ndarray | None = None
    cumulative: np.ndarray | None = None


def _compositions(d: int, total: int) -> np.ndarray:
    """All nonnegative integer d-vectors with sum <= total, one per row."""
    if d == 0:
        return np.zeros((1, 0), dtype=np.int64)
    if d == 1:
        return np.arange(total + 1, dtype=np.int64)[:, None]
    if d == 2:
        a, b = np.meshgrid(np.arange(total + 1), np.arange(total + 1), indexing="ij")
        keep = a + b <= total
        return np.stack([a[keep], b[keep]], axis=1).astype(np.int64)
    raise ValueError("grid search supports at most 4 categories")


def brute_force_max_mean(constraints: ConstraintSet, values, resolution: float = 1e-3) -> float:
    """Grid-search maximum of ``p . v`` over feasible simplex points.

    Grid points are multiples of ``resolution``. The first ``m - 2``
    coordinates are enumerated; the objective is linear in the last free
    coordinate, so its best feasible grid value sits at an end of the
    feasible grid range and is taken exactly.
    """
    v = check_values(values)
    m = v.size
    if not 2 <= m <= 4:
        raise ValueError("brute force supports 2 <= m <= 4")
    if resolution < 1e-3 - 1e-15:
        raise ValueError("resolution must be at least 1e-3")
    N = int(round(1.0 / resolution))
    if abs(N * resolution - 1.0) > 1e-9:
        raise ValueError("1/resolution must be an integer")
    eps = 1e-9
    lo = np.zeros(m) if constraints.lower is None else np.asarray(constraints.lower, float)
    hi = np.ones(m) if constraints.upper is None else np.asarray(constraints.upper, float)
    if constraints.cumulative is None:
        t = np.zeros(m + 1)
    else:
        t = np.asarray(constraints.cumulative, float)
        if t.size == m - 1:
            t = np.concatenate([[0.0], t, [1.0]])
        if t.size != m + 1:
            raise ValueError("cumulative thresholds must have length m + 1 or m - 1")
    loN, hiN, tN = lo * N, hi * N, t * N

    g = _compositions(m - 2, N)
    ok = np.ones(g.shape[0], dtype=bool)
    prefix = np.cumsum(g, axis=1)
    for j in range(m - 2):
        ok &= (g[:, j] >= loN[j] - eps) & (g[:, j] <= hiN[j] + eps)
        ok &= prefix[:, j] >= tN[j + 1] - eps
    g = g[ok]
    used = g.sum(axis=1)
    rest = N - used
    a, b = m - 2, m - 1
    gl = np.maximum.reduce([
        np.full(rest.shape, loN[a]),
        rest - hiN[b],
        np.zeros(rest.shape),
        tN[m - 1] - used,
    ])
    gh = np.minimum.reduce([np.full(rest.shape, hiN[a]), rest - loN[b], rest.astype(float)])
    gl = np.ceil(gl - eps)
    gh = np.floor(gh + eps)
    feasible = gl <= gh
    if not np.any(feasible):
        raise InfeasibleError("no grid point satisfies the constraints")
    g, rest, gl, gh = g[feasible], rest[feasible], gl[feasible], gh[feasible]
    last = gh if v[a] > v[b] else gl
    obj = g @ v[:a] + last * v[a] + (rest - last) * v[b]
    return float(np.max(obj) / N)


def brute_force_merge(values, h: int) -> float:
    """Least max run range over all contiguous partitions into ``h`` runs."""
    v = check_values(values)
    m = v.size
    if m > 12:
        raise ValueError("exhaustive merge search supports m <= 12")
    if isinstance(h, bool) or int(h) != h or not 1 <= h <= m:
        raise ValueError(f"h must be an integer in [1, {m}], got {h!r}")
    best = math.inf
    for cuts in itertools.combinations(range(1, m), int(h) - 1):
        edges = (0,) + cuts + (m,)
        worst = max(v[e - 1] - v[s] for s, e in zip(edges, edges[1:]))
        best = min(best, worst)
    return float(best)


def _relaxed_max(t: np.ndarray, active, values: np.ndarray) -> float:
    m = values.size
    # maximize v.p  <=>  minimize -v.p
    A, b = [], []
    for i in active:
        row = np.zeros(m)
        row[:i] = -1.0
        A.append(row)
        b.append(-t[i])
    res = linprog(
        -values,
        A_ub=np.array(A) if A else None,
        b_ub=np.array(b) if b else None,
        A_eq=np.ones((1, m)),
        b_eq=[1.0],
        bounds=[(0.0, 1.0)] * m,
        method="highs",
    )
    if not res.success:
        raise InfeasibleError(res.message)
    return float(-res.fun)


def brute_force_nu_correction(p, values, a: int) -> float:
    """Largest increase of the nest maximum when up to ``a`` thresholds fail.

    Thresholds are the cumulative sums of the nest maximizer ``p``. Every
    failure subset is tried; a failed threshold's constraint is dropped and
    the mean re-maximized by linear programming.
    """
    p = np.asarray(p, dtype=float)
    v = check_values(values)
    m = p.size
    t = np.concatenate([[0.0], np.cumsum(p)])
    t[-1] = 1.0
    all_bounds = range(1, m)
    base = _relaxed_max(t, list(all_bounds), v)
    best = 0.0
    for size in range(1, int(a) + 1):
        for failed in itertools.combinations(all_bounds, size):
            active = [i for i in all_bounds if i not in failed]
            best = max(best, _relaxed_max(t, active, v) - base)
    return best
