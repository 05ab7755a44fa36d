import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from favard_lab.fractals import (WeightedPointCloud, boundary, cantor_generation, cantor_interval_generation,
                                 corner_ifs_generation, sample_points, squares_from_csv, squares_to_csv,
                                 unit_segment)
from favard_lab.intervals import normalize
from favard_lab.projection import project_linear


def base4_digits(v, n):
    return [(v // 4 ** k) % 4 for k in range(n)]


def test_generation_zero_is_unit_square():
    s = cantor_generation(0)
    assert s.squares.tolist() == [[0, 0]] and s.side == 1.0


def test_generation_one_corners():
    s = cantor_generation(1)
    assert s.squares.tolist() == [[0, 0], [0, 3], [3, 0], [3, 3]]
    assert cantor_interval_generation(1) == [(0.0, 0.25), (0.75, 1.0)]


@pytest.mark.parametrize("n", range(0, 6))
def test_counts_digits_and_order(n):
    s = cantor_generation(n)
    assert len(s) == 4 ** n and s.scale_denominator == 4 ** n
    assert len({tuple(q) for q in s.squares.tolist()}) == 4 ** n
    for i, j in s.squares.tolist()[:64]:
        assert set(base4_digits(i, n)) <= {0, 3} and set(base4_digits(j, n)) <= {0, 3}
    keys = s.squares[:, 0] * s.scale_denominator + s.squares[:, 1]
    assert np.all(np.diff(keys) > 0)


def test_generation_bounds():
    with pytest.raises(ValueError):
        cantor_generation(13)
    with pytest.raises(ValueError):
        cantor_generation(-1)


@pytest.mark.parametrize("n", range(0, 5))
def test_nesting_by_subdivision(n):
    parent, child = cantor_generation(n), cantor_generation(n + 1)
    expect = sorted((4 * i + a, 4 * j + b) for i, j in parent.squares.tolist() for a in (0, 3) for b in (0, 3))
    assert sorted(map(tuple, child.squares.tolist())) == expect


@pytest.mark.parametrize("n", range(0, 6))
def test_x_shadow_is_cantor_interval_set(n):
    shadow = project_linear(0.0, cantor_generation(n))
    assert len(shadow) == 2 ** n
    assert shadow == normalize(cantor_interval_generation(n))
    assert all(hi - lo == pytest.approx(4.0 ** -n) for lo, hi in shadow)


def test_ifs_generations():
    assert corner_ifs_generation(2, {0, 3}, 4) == cantor_generation(2)
    full = corner_ifs_generation(1, {0, 1, 2, 3}, 4)
    assert len(full) == 16 and full.bounds()[:, [1, 3]].max() == 1.0
    tri = corner_ifs_generation(1, {0, 2}, 3)
    assert len(tri) == 4 and tri.side == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        corner_ifs_generation(1, set(), 4)
    with pytest.raises(ValueError):
        corner_ifs_generation(1, {5}, 4)


@pytest.mark.parametrize("n", range(0, 5))
def test_boundary_counts_and_length(n):
    e = boundary(cantor_generation(n))
    assert len(e) == 4 * 4 ** n
    assert np.allclose(e.lengths(), 4.0 ** -n)
    assert e.total_length == pytest.approx(4.0)


def test_unit_segment():
    seg = unit_segment()
    assert len(seg) == 1 and seg.total_length == 1.0


def test_membership():
    s = cantor_generation(1)
    assert s.contains(np.array([0.1, 0.9, 0.5]), np.array([0.1, 0.1, 0.5])).tolist() == [True, True, False]


def test_sample_points_weights():
    e1 = boundary(cantor_generation(1))
    c = sample_points(e1, 1, seed=3)
    assert len(c) == 16 and np.allclose(c.weights, 0.25) and c.total_weight == pytest.approx(4.0)
    for per in (1, 5, 32):
        assert sample_points(e1, per, seed=0).total_weight == pytest.approx(4.0)


def test_sample_points_lie_on_set_and_are_seeded():
    e2 = boundary(cantor_generation(2))
    a, b = sample_points(e2, 8, seed=11), sample_points(e2, 8, seed=11)
    assert np.array_equal(a.points, b.points)
    k2 = cantor_generation(2)
    assert k2.contains(a.points[:, 0], a.points[:, 1]).all()
    # square sets are sampled on their perimeters
    c = sample_points(k2, 4, seed=0)
    assert c.total_weight == pytest.approx(4.0)


def test_csv_roundtrips(tmp_path):
    s = cantor_generation(2)
    text = squares_to_csv(s)
    assert text.splitlines()[0] == "n,i,j"
    assert squares_from_csv(text) == s
    c = sample_points(boundary(cantor_generation(1)), 3, seed=1)
    back = WeightedPointCloud.from_csv(c.to_csv())
    assert np.array_equal(back.points, c.points) and np.array_equal(back.weights, c.weights)


def test_cloud_validation():
    with pytest.raises(ValueError):
        WeightedPointCloud(np.zeros((2, 2)), np.array([1.0, -1.0]))
    with pytest.raises(ValueError):
        WeightedPointCloud(np.zeros((2, 2)), np.ones(3))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 4), st.integers(2, 6), st.data())
def test_ifs_squares_inside_unit_square(n, base, data):
    digits = data.draw(st.sets(st.integers(0, base - 1), min_size=1))
    s = corner_ifs_generation(n, digits, base)
    b = s.bounds()
    assert len(s) == len(digits) ** (2 * n)
    assert b.min() >= 0.0 and b.max() <= 1.0
