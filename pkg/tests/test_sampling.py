import pytest

from geomate.geometry import Circle, Point, Polygon, Segment, generate_problem
from geomate.sampling import count_by_boundary_walk, pair_crossings


def test_segment_crossing():
    assert pair_crossings(Segment(Point(0, 0), Point(2, 2)), Segment(Point(0, 2), Point(2, 0))) == 1


def test_line_meets_beyond_extent_not_counted():
    assert pair_crossings(Segment(Point(0, 0), Point(1, 0)), Segment(Point(2, 1), Point(2, -1))) == 0


def test_collinear_disjoint():
    assert pair_crossings(Segment(Point(-3, 0), Point(-1, 0)), Segment(Point(1, 0), Point(3, 0))) == 0


def test_circle_chord_both_directions():
    c = Circle(Point(0, 0), 2)
    s = Segment(Point(-3, 0), Point(3, 0))
    assert pair_crossings(c, s) == 2
    assert pair_crossings(s, c) == 2


def test_circle_circle():
    assert pair_crossings(Circle(Point(0, 0), 2), Circle(Point(3, 0), 2)) == 2
    assert pair_crossings(Circle(Point(0, 0), 2), Circle(Point(5, 0), 2)) == 0


def test_polygon_cases():
    tri = Polygon((Point(0, 0), Point(2, 0), Point(1, 2)))
    assert pair_crossings(Segment(Point(1, -1), Point(1, 1)), tri) == 1
    assert pair_crossings(tri, Segment(Point(1, -1), Point(1, 1))) == 1
    square = Polygon((Point(-2, -2), Point(2, -2), Point(2, 2), Point(-2, 2)))
    assert pair_crossings(Circle(Point(0, 0), 1), square) == 0
    assert pair_crossings(Circle(Point(0, 0), 2.5), square) == 8


def test_total_matches_running_example():
    shapes = [Circle(Point(0, 0), 2), Segment(Point(-3, 0), Point(3, 0)),
              Segment(Point(0, -3), Point(0, 3))]
    assert count_by_boundary_walk(shapes) == 5


@pytest.mark.parametrize("level", [2, 3, 4, 5, 6])
def test_agreement_with_analytic_count(level):
    for i in range(40):
        p = generate_problem(level, 13_000 * level + i)
        assert count_by_boundary_walk(p) == p.answer, f"seed {13_000 * level + i}"
