import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discmean.bounds import CategorizedSample
from discmean.io import (
    SampleParseError,
    fmt,
    parse_csv,
    parse_json,
    read_sample,
    write_sample_csv,
    write_sample_json,
)
from discmean.methods import METHOD_NAMES, MethodConfig, canonical_method, compute_bound
from discmean.scenarios import SweepScenario, run_sweep, scenario_counts, scenario_values


# -- methods ------------------------------------------------------------

@pytest.mark.parametrize(
    "alias, name",
    [("MP", "maurer-pontil"), ("merge", "merged-nest"), ("nu", "nearly-uniform"), (" Box ", "box")],
)
def test_method_aliases(alias, name):
    assert canonical_method(alias) == name


def test_unknown_method_lists_valid_names():
    with pytest.raises(ValueError, match="valid methods: box, nest"):
        canonical_method("bogus")


def test_config_requires_parameters():
    with pytest.raises(ValueError):
        MethodConfig("merged-nest")
    with pytest.raises(ValueError):
        MethodConfig("nu")
    assert MethodConfig("nu", allowed_failures=2).describe() == "nearly-uniform(a=2) two"
    assert MethodConfig("merged", "upper", merged_categories=3).param == 3


def test_compute_bound_dispatch():
    s = CategorizedSample(np.full(5, 20), np.arange(5.0))
    for name in METHOD_NAMES:
        b = compute_bound(s, 0.05, name, merged_categories=3, allowed_failures=1)
        assert b.method == name
        assert b.lower <= 2.0 <= b.upper


# -- scenarios ----------------------------------------------------------

def test_scenario_values():
    assert list(scenario_values("linear", 4)) == [0, 1, 2, 3]
    assert list(scenario_values("exponential", 4)) == [1, 2, 4, 8]
    v = scenario_values("power", 100)
    assert v[0] == 1.0 and v[-1] == pytest.approx(2 ** 19.8)
    with pytest.raises(ValueError):
        scenario_values("cubic", 4)


def test_scenario_counts():
    assert list(scenario_counts("balanced", 4, 100)) == [25] * 4
    with pytest.raises(ValueError):
        scenario_counts("balanced", 3, 500)
    assert list(scenario_counts("doubling", 3, 7)) == [1, 2, 4]
    with pytest.raises(ValueError):
        scenario_counts("lumpy", 3, 7)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 30), st.integers(1, 5000))
def test_doubling_counts_round_faithfully(m, n):
    c = scenario_counts("doubling", m, n)
    ideal = n * 2.0 ** np.arange(m) / (2.0**m - 1)
    assert c.sum() == n
    assert np.all(np.abs(c - ideal) < 1.0 + 1e-9)


def test_sweep_rows_and_order():
    sc = SweepScenario("balanced", "linear", 10, [100, 200], methods=["box", "nest", "merged-nest", "nu"],
                       merged_categories=[5], allowed_failures=[1, 2])
    rows = run_sweep(sc)
    assert len(rows) == 2 * 5
    assert [r["method"] for r in rows[:5]] == ["box", "nest", "merged-nest", "nearly-uniform", "nearly-uniform"]
    assert [r["param"] for r in rows[:5]] == ["", "", 5, 1, 2]
    assert rows[0]["scenario"] == "balanced-linear"
    assert run_sweep(sc) == rows


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(count_shape="odd", value_shape="linear", m=4, n_grid=[8]),
        dict(count_shape="balanced", value_shape="linear", m=4, n_grid=[]),
        dict(count_shape="balanced", value_shape="linear", m=4, n_grid=[10]),
        dict(count_shape="balanced", value_shape="linear", m=4, n_grid=[8], methods=["merged-nest"]),
    ],
)
def test_sweep_validation(kwargs):
    with pytest.raises(ValueError):
        SweepScenario(**kwargs)


# -- io -----------------------------------------------------------------

def test_fmt_round_trips():
    for x in (0.1, 1 / 3, 2**19.8, -0.0):
        assert float(fmt(x)) == x


def test_parse_csv():
    assert parse_csv("value,count\n1.5,3\n\n0,2\n") == ([1.5, 0.0], [3, 2])


@pytest.mark.parametrize(
    "text, where",
    [
        ("", "line 1"),
        ("val,cnt\n1,2\n", "line 1"),
        ("value,count\n1,2,3\n", "line 2"),
        ("value,count\n1,2\nx,2\n", "line 3, field 'value'"),
        ("value,count\n1,2.5\n", "line 2, field 'count'"),
        ("value,count\n1,-2\n", "line 2, field 'count'"),
        ("value,count\ninf,2\n", "line 2, field 'value'"),
        ("value,count\n", "no data rows"),
    ],
)
def test_parse_csv_errors_name_location(text, where):
    with pytest.raises(SampleParseError, match=where):
        parse_csv(text)


@pytest.mark.parametrize(
    "text, where",
    [
        ("{", "line 1"),
        ("[1, 2]", "object"),
        ('{"values": [1]}', "'counts'"),
        ('{"values": [1, 2], "counts": [1]}', "differ"),
        ('{"values": [1, "a"], "counts": [1, 1]}', r"'values'\[1\]"),
        ('{"values": [1, 2], "counts": [1, 1.5]}', r"'counts'\[1\]"),
    ],
)
def test_parse_json_errors(text, where):
    with pytest.raises(SampleParseError, match=where):
        parse_json(text)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 10).flatmap(lambda m: st.tuples(
    st.lists(st.floats(-1e6, 1e6), min_size=m, max_size=m, unique=True),
    st.lists(st.integers(0, 1000), min_size=m, max_size=m).filter(lambda c: sum(c) > 0),
)))
def test_csv_and_json_round_trip(tmp_path_factory, data):
    values, counts = data
    order = np.argsort(values)
    s = CategorizedSample(np.array(counts)[order], np.array(values)[order])
    d = tmp_path_factory.mktemp("rt")
    write_sample_csv(d / "s.csv", s)
    write_sample_json(d / "s.json", s)
    assert read_sample(d / "s.csv") == s
    assert read_sample(d / "s.json") == s


def test_read_sample_normalizes(tmp_path):
    p = tmp_path / "x.json"
    p.write_text(json.dumps({"values": [2, 1, 2], "counts": [1, 1, 1]}))
    s = read_sample(p)
    assert list(s.values) == [1.0, 2.0] and list(s.counts) == [1, 2]
    p.write_text(json.dumps({"values": [1], "counts": [1]}))
    with pytest.raises(SampleParseError):
        read_sample(p)
