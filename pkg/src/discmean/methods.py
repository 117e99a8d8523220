"""Name-based dispatch over every bound method."""

from __future__ import annotations

from dataclasses import dataclass

from ._validation import check_delta, check_side
from .bounds import (
    BoundInterval,
    CategorizedSample,
    box_bounds,
    hoeffding_bounds,
    maurer_pontil_bounds,
    nest_bounds,
)
from .refine import merged_nest_bounds, nearly_uniform_nest_bounds

METHOD_NAMES = (
    "box",
    "nest",
    "hoeffding",
    "maurer-pontil",
    "merged-nest",
    "nearly-uniform",
)

_ALIASES = {
    "mp": "maurer-pontil",
    "maurer_pontil": "maurer-pontil",
    "merged": "merged-nest",
    "merge": "merged-nest",
    "nu": "nearly-uniform",
    "nearly_uniform": "nearly-uniform",
}


def canonical_method(name: str) -> str:
    key = str(name).strip().lower()
    key = _ALIASES.get(key, key)
    if key not in METHOD_NAMES:
        raise ValueError(
            f"unknown method {name!r}; valid methods: {', '.join(METHOD_NAMES)}"
        )
    return key


@dataclass(frozen=True)
class MethodConfig:
    """A bound method plus the parameters it needs.

    ``merged_categories`` is required by ``merged-nest`` and
    ``allowed_failures`` by ``nearly-uniform``; other methods ignore them.
    """

    method: str
    side: str = "two"
    merged_categories: int | None = None
    allowed_failures: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "method", canonical_method(self.method))
        object.__setattr__(self, "side", check_side(self.side))
        if self.method == "merged-nest" and self.merged_categories is None:
            raise ValueError("merged-nest needs merged_categories")
        if self.method == "nearly-uniform" and self.allowed_failures is None:
            raise ValueError("nearly-uniform needs allowed_failures")

    @property
    def param(self) -> int | None:
        if self.method == "merged-nest":
            return self.merged_categories
        if self.method == "nearly-uniform":
            return self.allowed_failures
        return None

    def describe(self) -> str:
        tag = self.method
        if self.param is not None:
            tag += f"({'h' if self.method == 'merged-nest' else 'a'}={self.param})"
        return f"{tag} {self.side}"

    def compute(self, sample: CategorizedSample, delta: float) -> BoundInterval:
        return compute_bound(
            sample,
            delta,
            self.method,
            self.side,
            merged_categories=self.merged_categories,
            allowed_failures=self.allowed_failures,
        )


def compute_bound(
    sample: CategorizedSample,
    delta: float,
    method: str = "nest",
    side: str = "two",
    merged_categories: int | None = None,
    allowed_failures: int | None = None,
) -> BoundInterval:
    """Evaluate ``method`` on ``sample``; see :data:`METHOD_NAMES`."""
    method = canonical_method(method)
    delta = check_delta(delta)
    side = check_side(side)
    if method == "box":
        return box_bounds(sample, delta, side)
    if method == "nest":
        return nest_bounds(sample, delta, side)
    if method == "hoeffding":
        return hoeffding_bounds(sample, delta, side)
    if method == "maurer-pontil":
        return maurer_pontil_bounds(sample, delta, side)
    if method == "merged-nest":
        if merged_categories is None:
            raise ValueError("merged-nest needs merged_categories")
        return merged_nest_bounds(sample, delta, merged_categories, side)
    if allowed_failures is None:
        raise ValueError("nearly-uniform needs allowed_failures")
    return nearly_uniform_nest_bounds(sample, delta, allowed_failures, side)
