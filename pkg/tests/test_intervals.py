import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from favard_lab.intervals import (IntervalUnion, dilate, from_arrays, from_csv, intersect, measure, normalize,
                                  to_csv, union, union_measure)


def test_overlap_merge():
    assert normalize([(0, 1), (0.5, 2)]).intervals == ((0.0, 2.0),)


def test_disjoint_preserved():
    assert normalize([(0, 1), (2, 3)]).intervals == ((0.0, 1.0), (2.0, 3.0))


def test_sub_epsilon_gap_merged():
    assert normalize([(0, 1), (1 + 1e-13, 2)]).intervals == ((0.0, 2.0),)


def test_inverted_interval_rejected():
    with pytest.raises(ValueError):
        normalize([(1, 0)])


@pytest.mark.parametrize("raw, expected", [([(0, 1), (2, 3)], 2.0), ([], 0.0), ([(0, 0.28125)], 0.28125)])
def test_measure_examples(raw, expected):
    assert measure(normalize(raw)) == expected


@pytest.mark.parametrize("args, expected", [((0.5, 0.1, 5), (0.0, 1.0)), ((0, 1, 1), (-1.0, 1.0)),
                                            ((1, 0, 5), (1.0, 1.0))])
def test_dilate(args, expected):
    assert dilate(*args) == pytest.approx(expected, abs=1e-15)


def test_intersect_examples():
    assert intersect(normalize([(0, 2)]), normalize([(1, 3)])).intervals == ((1.0, 2.0),)
    assert intersect(normalize([(0, 1)]), normalize([(2, 3)])).intervals == ()
    a = normalize([(0, 1), (2, 5), (7, 7.5)])
    assert intersect(a, a) == a


def test_membership_and_shift():
    u = normalize([(0, 1), (2, 3)])
    assert u.contains(0.5) and u.contains(3.0) and not u.contains(1.5)
    assert u.shift(1.0).intervals == ((1.0, 2.0), (3.0, 4.0))


def test_csv_roundtrip_keeps_every_bit():
    u = normalize([(0.1, 1 / 3), (2 ** -40, 2 ** -39 + 1e-3)])
    text = to_csv(u)
    assert text.splitlines()[0] == "lo,hi"
    assert from_csv(text) == u


def test_from_arrays_skips_invalid():
    u = from_arrays(np.array([[0.0, 5.0, 2.0]]), np.array([[1.0, 6.0, 3.0]]), np.array([[True, False, True]]))
    assert u.intervals == ((0.0, 1.0), (2.0, 3.0))


intervals = st.lists(st.tuples(st.floats(-10, 10), st.floats(0, 3)).map(lambda p: (p[0], p[0] + p[1])),
                     max_size=12)


@given(intervals, intervals)
def test_subadditivity(x, y):
    assert measure(normalize(x + y)) <= measure(normalize(x)) + measure(normalize(y)) + 1e-12


@given(intervals, intervals)
def test_inclusion_exclusion(x, y):
    a, b = normalize(x), normalize(y)
    lhs = measure(intersect(a, b)) + measure(normalize(x + y))
    # merged sub-epsilon gaps may add up to count * 1e-12
    assert lhs == pytest.approx(measure(a) + measure(b), abs=1e-12 * (len(x) + len(y) + 1))


@given(intervals)
def test_normalize_idempotent(x):
    u = normalize(x)
    assert normalize(u.intervals) == u


@given(intervals, intervals)
def test_union_matches_concatenation(x, y):
    assert union(normalize(x), normalize(y)) == normalize(x + y)


@settings(max_examples=50)
@given(st.lists(intervals, min_size=1, max_size=4))
def test_vectorized_union_measure_matches_normalize(rows):
    k = max(len(r) for r in rows)
    lo = np.zeros((len(rows), max(k, 1)))
    hi = np.zeros_like(lo)
    ok = np.zeros_like(lo, dtype=bool)
    for i, r in enumerate(rows):
        for j, (a, b) in enumerate(r):
            lo[i, j], hi[i, j], ok[i, j] = a, b, True
    got = union_measure(lo, hi, ok)
    for i, r in enumerate(rows):
        assert got[i] == pytest.approx(measure(normalize(r)), abs=1e-11)


def test_empty_union_is_falsy():
    assert not IntervalUnion(())
    assert measure(IntervalUnion(())) == 0.0
