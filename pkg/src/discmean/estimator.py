"""scikit-learn style front end."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted, column_or_1d

from ._validation import check_delta, check_side
from .bounds import CategorizedSample, normalize_sample, sample_stats
from .methods import compute_bound, canonical_method


class DiscreteMeanBound(BaseEstimator):
    """PAC bounds on the mean of a variable with a known finite support.

    Parameters
    ----------
    method : str, default="nest"
        One of ``box``, ``nest``, ``hoeffding``, ``maurer-pontil``,
        ``merged-nest``, ``nearly-uniform``.
    delta : float, default=0.05
        Probability that the bound fails.
    side : {"two", "upper", "lower"}, default="two"
    merged_categories : int, optional
        Category count after merging, for ``merged-nest``.
    allowed_failures : int, optional
        Tolerated threshold failures, for ``nearly-uniform``.
    support : array-like, optional
        Every value the variable can take. Values never observed still
        count as categories. Defaults to the distinct observed values.

    Attributes
    ----------
    sample_ : CategorizedSample
    interval_ : BoundInterval
    lower_, upper_ : float
    mean_ : float
        Sample mean.
    n_samples_seen_ : int

    Examples
    --------
    >>> est = DiscreteMeanBound(delta=0.05).fit([0, 1, 1, 2, 2, 2])
    >>> est.lower_ <= est.mean_ <= est.upper_
    True
    """

    def __init__(
        self,
        method="nest",
        delta=0.05,
        side="two",
        merged_categories=None,
        allowed_failures=None,
        support=None,
    ):
        self.method = method
        self.delta = delta
        self.side = side
        self.merged_categories = merged_categories
        self.allowed_failures = allowed_failures
        self.support = support

    def _validate_params(self):
        canonical_method(self.method)
        check_delta(self.delta)
        check_side(self.side)

    def fit(self, X, y=None, sample_weight=None):
        """Fit from raw observations.

        ``X`` is a 1-d array (or single column) of observed values.
        ``sample_weight`` holds integer frequency weights, so
        ``fit(values, sample_weight=counts)`` fits from a count table.
        """
        self._validate_params()
        X = check_array(X, ensure_2d=False, dtype=np.float64)
        if X.ndim == 2:
            X = column_or_1d(X)
        if sample_weight is None:
            weights = np.ones(X.shape[0], dtype=np.int64)
        else:
            weights = np.asarray(sample_weight)
            if weights.shape != X.shape:
                raise ValueError("sample_weight must match X in length")
            if np.any(weights < 0) or np.any(weights != np.round(weights)):
                raise ValueError("sample_weight must hold nonnegative integer frequencies")
            weights = weights.astype(np.int64)
        observed = normalize_sample(weights, X)
        if self.support is None:
            sample = observed
        else:
            support = np.unique(np.asarray(self.support, dtype=float))
            idx = np.searchsorted(support, observed.values)
            idx_ok = idx < support.size
            if not np.all(idx_ok) or not np.all(support[idx] == observed.values):
                raise ValueError("observations fall outside the declared support")
            counts = np.zeros(support.size, dtype=np.int64)
            counts[idx] = observed.counts
            sample = CategorizedSample(counts, support)
        return self._fit_sample(sample)

    def fit_counts(self, counts, values):
        """Fit from per-category counts and values."""
        self._validate_params()
        return self._fit_sample(normalize_sample(counts, values))

    def _fit_sample(self, sample):
        self.sample_ = sample
        self.interval_ = compute_bound(
            sample,
            self.delta,
            self.method,
            self.side,
            merged_categories=self.merged_categories,
            allowed_failures=self.allowed_failures,
        )
        self.lower_ = self.interval_.lower
        self.upper_ = self.interval_.upper
        self.n_samples_seen_ = sample.n
        self.mean_ = float(np.dot(sample.counts, sample.values) / sample.n)
        return self

    def sample_statistics(self):
        """``(mean, variance, range)`` of the fitted sample."""
        check_is_fitted(self, "interval_")
        return sample_stats(self.sample_)

    def predict(self, X=None):
        """Bounds as an array ``[[lower, upper]]`` repeated for each row of ``X``.

        The bound does not depend on ``X``; this exists so the estimator can
        sit at the end of a pipeline.
        """
        check_is_fitted(self, "interval_")
        rows = 1 if X is None else len(X)
        return np.tile([self.lower_, self.upper_], (rows, 1))
