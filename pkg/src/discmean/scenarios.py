"""Deterministic count/value scenarios and the comparison sweep."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bounds import CategorizedSample
from .methods import MethodConfig, canonical_method

COUNT_SHAPES = ("balanced", "doubling")
VALUE_SHAPES = ("linear", "exponential", "power")
BASE_METHODS = ("box", "nest", "hoeffding", "maurer-pontil")

SWEEP_COLUMNS = ("scenario", "method", "m", "n", "param", "lower", "upper")


def scenario_values(shape: str, m: int, scale: float = 20.0) -> np.ndarray:
    """``linear``: 0..m-1; ``exponential``: 2**0..2**(m-1);
    ``power``: ``2 ** (scale * (i - 1) / m)`` for i = 1..m."""
    i = np.arange(m, dtype=float)
    if shape == "linear":
        return i
    if shape == "exponential":
        return 2.0 ** i
    if shape == "power":
        return 2.0 ** (scale * i / m)
    raise ValueError(f"value shape must be one of {', '.join(VALUE_SHAPES)}, got {shape!r}")


def scenario_counts(shape: str, m: int, n: int) -> np.ndarray:
    """Counts summing to ``n``.

    ``balanced`` needs ``m | n``. ``doubling`` targets weights
    ``2**(i-1) / (2**m - 1)`` and rounds by largest remainder; remainder
    ties go to the lower index.
    """
    if shape == "balanced":
        if n % m:
            raise ValueError(f"balanced counts need m={m} to divide n={n}")
        return np.full(m, n // m, dtype=np.int64)
    if shape == "doubling":
        # exact integer arithmetic keeps the rounding platform independent
        total = (1 << m) - 1
        ideal_num = [n * (1 << i) for i in range(m)]
        base = np.array([x // total for x in ideal_num], dtype=np.int64)
        rem = [x % total for x in ideal_num]
        short = n - int(base.sum())
        order = sorted(range(m), key=lambda i: (-rem[i], i))
        for i in order[:short]:
            base[i] += 1
        return base
    raise ValueError(f"count shape must be one of {', '.join(COUNT_SHAPES)}, got {shape!r}")


def scenario_sample(count_shape: str, value_shape: str, m: int, n: int, scale: float = 20.0) -> CategorizedSample:
    return CategorizedSample(scenario_counts(count_shape, m, n), scenario_values(value_shape, m, scale))


@dataclass
class SweepScenario:
    count_shape: str
    value_shape: str
    m: int
    n_grid: list
    delta: float = 0.05
    methods: list = field(default_factory=lambda: list(BASE_METHODS))
    merged_categories: list = field(default_factory=list)
    allowed_failures: list = field(default_factory=list)
    side: str = "two"
    scale: float = 20.0

    def __post_init__(self):
        if self.count_shape not in COUNT_SHAPES:
            raise ValueError(f"count shape must be one of {', '.join(COUNT_SHAPES)}")
        if self.value_shape not in VALUE_SHAPES:
            raise ValueError(f"value shape must be one of {', '.join(VALUE_SHAPES)}")
        if int(self.m) != self.m or self.m < 2:
            raise ValueError("m must be an integer >= 2")
        if not self.n_grid:
            raise ValueError("n grid is empty")
        for n in self.n_grid:
            if int(n) != n or n < 1:
                raise ValueError(f"n values must be positive integers, got {n!r}")
            if self.count_shape == "balanced" and (n < self.m or n % self.m):
                raise ValueError(f"balanced scenario needs n >= m and m | n (n={n}, m={self.m})")
        self.methods = [canonical_method(x) for x in self.methods]
        if "merged-nest" in self.methods and not self.merged_categories:
            raise ValueError("merged-nest needs at least one merged category count")
        if "nearly-uniform" in self.methods and not self.allowed_failures:
            raise ValueError("nearly-uniform needs at least one allowed failure count")

    @property
    def name(self) -> str:
        return f"{self.count_shape}-{self.value_shape}"

    def configs(self) -> list[MethodConfig]:
        out = []
        for method in self.methods:
            if method == "merged-nest":
                out += [MethodConfig(method, self.side, merged_categories=h) for h in self.merged_categories]
            elif method == "nearly-uniform":
                out += [MethodConfig(method, self.side, allowed_failures=a) for a in self.allowed_failures]
            else:
                out.append(MethodConfig(method, self.side))
        return out


def run_sweep(scenario: SweepScenario) -> list[dict]:
    """One row per (n, method, parameter), in grid then method order."""
    values = scenario_values(scenario.value_shape, scenario.m, scenario.scale)
    configs = scenario.configs()
    rows = []
    for n in scenario.n_grid:
        sample = CategorizedSample(scenario_counts(scenario.count_shape, scenario.m, int(n)), values)
        for cfg in configs:
            b = cfg.compute(sample, scenario.delta)
            rows.append(
                {
                    "scenario": scenario.name,
                    "method": cfg.method,
                    "m": scenario.m,
                    "n": int(n),
                    "param": "" if cfg.param is None else cfg.param,
                    "lower": b.lower,
                    "upper": b.upper,
                }
            )
    return rows

