import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from favard_lab.curves import extend_curve, make_circle_arc, make_parabola
from favard_lab.fractals import SquareSet, boundary, cantor_generation
from favard_lab.intervals import IntervalUnion, measure, normalize
from favard_lab.projection import (ProjectionQuery, multiplicity_at, parameter_domain, project_linear,
                                   project_point, project_set, project_square, projection_measure)

from oracles import raster_curve_image


def flat(u):
    return [x for iv in u for x in iv]


def test_project_point_examples(parabola, arc):
    assert project_point(ProjectionQuery(parabola, 0.0), (0.5, 1.0)) == 0.875
    assert project_point(ProjectionQuery(parabola, 0.0), (2.0, 1.0)) is None
    assert project_point(ProjectionQuery(arc, 1.0), (1.0, 3.0)) == 3.0


def test_project_point_extension(parabola):
    p = (0.9 + 0.5e-5, 1.0)
    assert project_point(ProjectionQuery(parabola, 0.0), p) is None
    assert project_point(ProjectionQuery(parabola, 0.0, use_extension=True), p) == pytest.approx(
        1.0 - parabola.phi_plus(p[0]))


def test_query_rejects_non_finite_alpha(parabola):
    with pytest.raises(ValueError):
        ProjectionQuery(parabola, math.nan)


def test_parameter_domain(parabola, arc):
    assert parameter_domain(parabola) == (-0.9, 1.9)
    assert parameter_domain(arc) == (-1.0, 2.0)


def test_linear_examples():
    assert measure(project_linear(0.0, cantor_generation(1))) == 0.5
    assert project_linear(0.0, cantor_generation(1)) == normalize([(0, 0.25), (0.75, 1)])
    assert flat(project_linear(math.pi / 2, cantor_generation(0))) == pytest.approx([0.0, 1.0], abs=1e-15)
    assert measure(project_linear(math.pi / 4, cantor_generation(0))) == pytest.approx(math.sqrt(2))


def test_project_square_examples(parabola):
    q = ProjectionQuery(parabola, 0.0)
    img = project_square(q, (0.0, 0.25, 0.0, 0.25))
    assert flat(img) == pytest.approx([-0.03125, 0.25])
    assert measure(img) == pytest.approx(0.28125)
    assert project_square(q, (-3.0, -2.0, 0.0, 1.0)) == IntervalUnion(())
    # the critical point of phi sits inside the clipped range
    img = project_square(q, (-0.25, 0.25, 0.0, 0.25))
    assert flat(img) == pytest.approx([-0.03125, 0.25])


def test_project_square_partial_overlap_clips_t(parabola):
    q = ProjectionQuery(parabola, 0.0)
    # only t in [0.8, 0.9] is inside the domain
    img = project_square(q, (0.8, 1.2, 0.0, 0.0))
    assert flat(img) == pytest.approx([-0.405, -0.32])


@pytest.mark.parametrize("case", range(8))
def test_project_square_matches_raster(case):
    rng = np.random.default_rng(case)
    curve = extend_curve(make_circle_arc(2.0, (-1.0, 1.0))) if case % 2 else \
        extend_curve(make_parabola(0.4, (-0.8, 1.0)))
    side = rng.uniform(0.05, 0.5)
    x0, y0 = rng.uniform(0, 1 - side, 2)
    sq = (x0, x0 + side, y0, y0 + side)
    a, b = parameter_domain(curve)
    alpha = rng.uniform(a, b)
    got = measure(project_square(ProjectionQuery(curve, alpha), sq))
    assert got == pytest.approx(raster_curve_image(curve, alpha, sq, points=250_000), abs=1e-4)


def test_unit_square_vertical_extent_preserved(arc):
    for alpha in np.linspace(-0.0, 0.0, 1):
        assert projection_measure(ProjectionQuery(arc, alpha), cantor_generation(0)) >= 1.0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_boundary_and_squares_project_identically(n, arc):
    k, e = cantor_generation(n), boundary(cantor_generation(n))
    for alpha in np.linspace(-1, 2, 13):
        q = ProjectionQuery(arc, alpha)
        assert project_set(q, e) == project_set(q, k)


def test_empty_set_projects_to_empty(arc):
    empty = SquareSet(2, np.zeros((0, 2), dtype=np.int64))
    assert project_set(ProjectionQuery(arc, 0.3), empty) == IntervalUnion(())


def test_multiplicity_examples():
    k1 = cantor_generation(1)
    # a strongly curved parabola can pull the four images apart
    arc = extend_curve(make_parabola(0.6, (-0.83, 0.83)))
    # find an alpha at which all four images are nonempty and pairwise disjoint
    for alpha in np.linspace(-1, 2, 301):
        q = ProjectionQuery(arc, alpha)
        ivs = sorted(iv for r in k1.bounds() for iv in project_square(q, r))
        if len(ivs) == 4 and all(ivs[i][1] < ivs[i + 1][0] for i in range(3)):
            break
    else:
        pytest.fail("no separating alpha found")
    beta = 0.5 * sum(ivs[0])
    assert multiplicity_at(q, beta, k1) == 1
    assert multiplicity_at(q, 100.0, k1) == 0
    k0 = cantor_generation(0)
    img = project_set(q, k0).intervals[0]
    assert multiplicity_at(q, 0.5 * (img[0] + img[1]), k0) == 1


squares = st.tuples(st.floats(0, 0.8), st.floats(0, 0.8), st.floats(0.001, 0.2))


@settings(max_examples=60, deadline=None)
@given(squares, st.floats(-1, 2))
def test_contraction_bound(sq, alpha):
    curve = extend_curve(make_circle_arc(2.0, (-1.0, 1.0)))
    x, y, s = sq
    m = measure(project_square(ProjectionQuery(curve, alpha), (x, x + s, y, y + s)))
    assert m <= 2 * s * math.sqrt(2) + 1e-12


@settings(max_examples=60, deadline=None)
@given(squares, st.floats(0, 1), st.floats(0, 1), st.floats(-1, 2))
def test_monotone_under_inclusion(sq, fx, fy, alpha):
    curve = extend_curve(make_circle_arc(2.0, (-1.0, 1.0)))
    x, y, s = sq
    big = (x, x + s, y, y + s)
    small = (x + fx * s / 2, x + fx * s / 2 + s / 2, y + fy * s / 2, y + fy * s / 2 + s / 2)
    q = ProjectionQuery(curve, alpha)
    outer = project_square(q, big)
    for lo, hi in project_square(q, small):
        assert outer.contains(lo) and outer.contains(hi)


@settings(max_examples=60, deadline=None)
@given(st.floats(-0.5, 1.5), st.floats(-1, 1), st.floats(-5, 5), st.floats(-1, 2))
def test_translation_equivariance(px, py, c, alpha):
    curve = extend_curve(make_circle_arc(2.0, (-1.0, 1.0)))
    q = ProjectionQuery(curve, alpha)
    a, b = project_point(q, (px, py)), project_point(q, (px, py + c))
    assert (a is None) == (b is None)
    if a is not None:
        assert b == pytest.approx(a + c, abs=1e-12)
