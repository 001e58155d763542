import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aindex.metrics import (
    DEFAULT_WEIGHTS,
    FIELDS,
    IndexReport,
    InvalidInputsError,
    MetricInputs,
    WeightVector,
    a_index,
    asf,
    g_index,
    h_index,
    mu_linear,
    mu_thresholded,
    saturating_ratio,
    validate_inputs,
)
from oracles import brute_g, brute_h, oracle_a, six_terms

citation_lists = st.lists(st.integers(min_value=0, max_value=500), max_size=60)


@st.composite
def valid_inputs(draw, hi=5000):
    n1 = draw(st.integers(0, hi))
    n3 = draw(st.integers(0, n1))
    n4 = draw(st.integers(0, n1))
    n6 = draw(st.integers(0, min(n3, n4)))
    n2 = draw(st.integers(0, hi * 10))
    n5 = draw(st.integers(0, n2))
    return MetricInputs(n1, n2, n3, n4, n5, n6)


# ---- saturating_ratio


@pytest.mark.parametrize("x, expected", [(0, 0.0), (1, 0.5), (4.6, 4.6 / 5.6)])
def test_saturating_ratio_values(x, expected):
    assert saturating_ratio(x) == pytest.approx(expected, abs=1e-15)


def test_saturating_ratio_mu5_factor():
    # n5 = 300 -> x = (300 - 70) / 50 = 4.6
    assert saturating_ratio(4.6) == pytest.approx(0.8214285714, abs=1e-9)


@pytest.mark.parametrize("bad", [-1, -1e-9, float("nan"), float("inf")])
def test_saturating_ratio_rejects(bad):
    with pytest.raises(ValueError):
        saturating_ratio(bad)


@given(st.floats(0, 1e6), st.floats(0, 1e6))
def test_saturating_ratio_monotone_bounded(a, b):
    lo, hi = sorted((a, b))
    assert 0 <= saturating_ratio(lo) <= saturating_ratio(hi) < 1


# ---- h and g


def test_h_index_examples():
    assert h_index([]) == 0
    assert h_index([3, 0, 6, 1, 5]) == 3
    example1 = [30] * 8 + [20, 11, 11] + [11, 5, 4, 3, 2, 1, 1, 0, 0]
    assert sum(c >= 11 for c in example1) >= 11
    assert h_index(example1) == 11


def test_g_index_examples():
    assert g_index([]) == 0
    assert g_index([1, 1, 1]) == 1
    assert g_index([10, 5, 3]) == 3


@pytest.mark.parametrize("fn", [h_index, g_index])
@pytest.mark.parametrize("bad", [[1, -1], [1.5], [True]])
def test_indices_reject_bad_counts(fn, bad):
    with pytest.raises(ValueError):
        fn(bad)


def test_h_index_exhaustive_small():
    for size in range(0, 6):
        for combo in itertools.combinations_with_replacement(range(8), size):
            assert h_index(combo) == brute_h(combo)
            assert g_index(combo) == brute_g(combo)


@given(citation_lists)
def test_h_g_against_oracle(cites):
    h, g = h_index(cites), g_index(cites)
    assert h == brute_h(cites)
    assert g == brute_g(cites)
    assert h <= g <= len(cites)


@given(citation_lists, st.randoms())
def test_h_permutation_and_subset(cites, rnd):
    shuffled = list(cites)
    rnd.shuffle(shuffled)
    assert h_index(shuffled) == h_index(cites)
    subset = [c for c in cites if rnd.random() < 0.5]
    assert h_index(subset) <= h_index(cites)


# ---- asf


def test_asf_values():
    assert asf(0) == 0.0
    assert asf(1) == 50.0
    assert asf(5) == pytest.approx(83.333, abs=1e-3)


def test_asf_increasing_below_100():
    values = [asf(h) for h in range(0, 2000)]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert values[-1] < 100


def test_asf_rejects_negative():
    with pytest.raises(ValueError):
        asf(-1)


# ---- mu terms


@pytest.mark.parametrize(
    "n, w, expected",
    [(0, 30, 0.0), (11, 14, 14 * 11 / 12), (15, 14, 13.125)],
)
def test_mu_linear(n, w, expected):
    assert mu_linear(n, w) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize(
    "n, t, s, w, expected",
    [(100, 100, 200, 10, 0.0), (300, 100, 200, 10, 5.0), (100, 70, 50, 12, 4.5), (0, 70, 50, 12, 0.0)],
)
def test_mu_thresholded(n, t, s, w, expected):
    assert mu_thresholded(n, t, s, w) == pytest.approx(expected, abs=1e-12)


def test_mu_thresholded_flat_below_threshold():
    assert {mu_thresholded(n, 70, 50, 12) for n in range(71)} == {0.0}


def test_mu_rejects_bad_args():
    with pytest.raises(ValueError):
        mu_linear(-1, 10)
    with pytest.raises(ValueError):
        mu_linear(1, -10)
    with pytest.raises(ValueError):
        mu_thresholded(5, 0, 0, 1)


# ---- validation


def test_validate_examples():
    assert validate_inputs(MetricInputs(20, 300, 11, 15, 300, 8)) == []
    (v,) = validate_inputs(MetricInputs(20, 300, 11, 25, 300, 8))
    assert v.startswith("n4 > n1")
    (v,) = validate_inputs(MetricInputs(20, 300, 11, 15, 300, 12))
    assert v.startswith("n6 > n3")


def test_validate_type_and_sign():
    problems = validate_inputs(MetricInputs(-1, 2.5, 0, 0, 0, 0))
    assert any(p.startswith("n1") for p in problems)
    assert any(p.startswith("n2") for p in problems)


@pytest.mark.parametrize(
    "values, rule",
    [
        ((5, 10, 3, 1, 11, 0), "n5 > n2"),
        ((5, 10, 6, 1, 1, 0), "n3 > n1"),
        ((5, 10, 3, 1, 1, 2), "n6 > n4"),
    ],
)
def test_validate_each_order_rule(values, rule):
    assert any(p.startswith(rule) for p in validate_inputs(MetricInputs(*values)))


# ---- weights


def test_default_weights():
    assert DEFAULT_WEIGHTS.weights == (20, 10, 14, 14, 12, 30)
    assert DEFAULT_WEIGHTS.total == 100
    assert DEFAULT_WEIGHTS.thresholds == (100, 200, 70, 50)


@pytest.mark.parametrize("kwargs", [{"w3": -1}, {"s2": 0}, {"s5": -2}, {"w1": float("nan")}])
def test_weight_vector_rejects(kwargs):
    with pytest.raises(ValueError):
        WeightVector(**kwargs)


# ---- a_index


@pytest.mark.parametrize(
    "values, expected",
    [
        ((20, 200, 11, 5, 100, 3), 73.881),
        ((0, 0, 0, 0, 0, 0), 0.0),
        ((20, 300, 11, 15, 300, 8), 86.530),
    ],
)
def test_a_index_anchors(values, expected):
    report = a_index(MetricInputs(*values))
    assert report.a_index == pytest.approx(expected, abs=5e-4)
    assert report.a_index == pytest.approx(oracle_a(values), abs=1e-9)


def test_a_index_terms_match_hand_values():
    report = a_index(MetricInputs(20, 200, 11, 5, 100, 3))
    expected = (19.0476, 3.3333, 12.8333, 11.6667, 4.5, 22.5)
    assert report.mu == pytest.approx(expected, abs=1e-4)


def test_a_index_rejects_invalid():
    with pytest.raises(InvalidInputsError) as info:
        a_index(MetricInputs(20, 300, 11, 25, 300, 8))
    assert "n4" in str(info.value)


def test_a_index_with_citations_reports_g():
    report = a_index(MetricInputs(3, 18, 2, 0, 0, 0), citations=[10, 5, 3])
    assert report.g_all == 3
    assert report.h_all == 2
    assert report.asf == pytest.approx(200 / 3)


def test_report_roundtrip_and_normalized():
    w = WeightVector.from_weights([1, 1, 1, 1, 1, 1])
    report = a_index(MetricInputs(4, 150, 2, 1, 80, 1), w)
    assert report.normalized == pytest.approx(report.a_index * 100 / 6)
    assert IndexReport.from_dict(report.to_dict()) == report


@settings(max_examples=300)
@given(valid_inputs())
def test_a_index_matches_oracle_and_bounds(inputs):
    report = a_index(inputs)
    assert report.a_index == pytest.approx(oracle_a(inputs.as_tuple()), abs=1e-9)
    assert math.isclose(report.a_index, sum(report.mu), abs_tol=1e-9)
    for mu, w in zip(report.mu, DEFAULT_WEIGHTS.weights):
        assert 0 <= mu < w
    assert 0 <= report.a_index < 100


@settings(max_examples=300)
@given(valid_inputs(), st.sampled_from(FIELDS), st.integers(1, 500))
def test_monotone_and_delta_identity(inputs, name, step):
    bigger = inputs.replace(**{name: getattr(inputs, name) + step})
    if validate_inputs(bigger):
        return
    lo, hi = a_index(inputs), a_index(bigger)
    assert hi.a_index >= lo.a_index
    i = FIELDS.index(name)
    assert hi.a_index - lo.a_index == pytest.approx(hi.mu[i] - lo.mu[i], abs=1e-9)
    if name in ("n1", "n3", "n4", "n6"):
        assert hi.a_index > lo.a_index


def test_exact_oracle_terms_are_rational():
    terms = six_terms((20, 300, 11, 15, 300, 8))
    assert terms[1] == 5 and terms[3] == pytest.approx(13.125)
