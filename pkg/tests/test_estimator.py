import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from discmean import DiscreteMeanBound, nest_bounds
from discmean.bounds import CategorizedSample


def test_params_and_clone():
    est = DiscreteMeanBound(method="nu", delta=0.1, allowed_failures=2)
    params = est.get_params()
    assert params["method"] == "nu" and params["allowed_failures"] == 2
    twin = clone(est)
    assert twin.get_params() == params
    twin.set_params(delta=0.2)
    assert est.delta == 0.1


def test_fit_matches_functional_api():
    x = np.repeat(np.arange(5.0), [3, 8, 10, 6, 3])
    est = DiscreteMeanBound().fit(x)
    ref = nest_bounds(CategorizedSample(np.array([3, 8, 10, 6, 3]), np.arange(5.0)), 0.05)
    assert (est.lower_, est.upper_) == (ref.lower, ref.upper)
    assert est.n_samples_seen_ == 30
    assert est.mean_ == pytest.approx(x.mean())


def test_fit_with_weights_equals_raw():
    a = DiscreteMeanBound(method="box").fit([0.0, 1.0, 2.0], sample_weight=[2, 5, 3])
    b = DiscreteMeanBound(method="box").fit([0, 0, 1, 1, 1, 1, 1, 2, 2, 2])
    assert (a.lower_, a.upper_) == (b.lower_, b.upper_)
    with pytest.raises(ValueError):
        DiscreteMeanBound().fit([0.0, 1.0], sample_weight=[1, 0.5])


def test_column_input():
    x = np.array([[0.0], [1.0], [1.0], [2.0]])
    assert DiscreteMeanBound().fit(x).n_samples_seen_ == 4


def test_support_adds_unobserved_categories():
    x = [1.0, 1.0, 2.0, 2.0, 2.0]
    plain = DiscreteMeanBound().fit(x)
    wide = DiscreteMeanBound(support=[0.0, 1.0, 2.0, 3.0]).fit(x)
    assert wide.sample_.m == 4
    assert wide.lower_ < plain.lower_ and wide.upper_ > plain.upper_
    with pytest.raises(ValueError, match="outside"):
        DiscreteMeanBound(support=[0.0, 1.0]).fit(x)


def test_fit_counts_and_predict():
    est = DiscreteMeanBound(method="mp").fit_counts([10, 10, 10], [0.0, 1.0, 2.0])
    pred = est.predict(np.zeros((3, 2)))
    assert pred.shape == (3, 2)
    assert np.all(pred == [est.lower_, est.upper_])
    mean, var, r = est.sample_statistics()
    assert mean == 1.0 and r == 2.0


def test_unfitted_and_bad_params():
    with pytest.raises(NotFittedError):
        DiscreteMeanBound().predict()
    with pytest.raises(ValueError):
        DiscreteMeanBound(method="bogus").fit([0.0, 1.0])
    with pytest.raises(ValueError):
        DiscreteMeanBound(delta=1.5).fit([0.0, 1.0])
    with pytest.raises(ValueError):
        DiscreteMeanBound(side="both-ish").fit([0.0, 1.0])
