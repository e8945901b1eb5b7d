import math

import pytest
from hypothesis import given, settings, strategies as st

from geomate.geometry import (
    Circle,
    DegenerateConfiguration,
    DegenerateOverlap,
    GenerationExhausted,
    GeneratorConfig,
    GeometryProblem,
    IntersectionSet,
    ParseError,
    Point,
    Polygon,
    Segment,
    count_intersections,
    format_problem,
    generate_problem,
    intersect_circle_circle,
    intersect_segment_circle,
    intersect_segment_segment,
    intersect_shapes,
    parse_problem,
    translate_shape,
)


def pts(iset):
    return sorted((round(p.x, 9), round(p.y, 9)) for p in iset)


class TestSegmentSegment:
    def test_symmetric_crossing(self):
        out = intersect_segment_segment(Segment(Point(0, 0), Point(2, 2)),
                                        Segment(Point(0, 2), Point(2, 0)))
        assert pts(out) == [(1.0, 1.0)]

    def test_parallel_disjoint(self):
        out = intersect_segment_segment(Segment(Point(0, 0), Point(1, 0)),
                                        Segment(Point(0, 1), Point(1, 1)))
        assert len(out) == 0

    def test_line_meets_beyond_extent(self):
        # The supporting lines cross at (2, 0), outside the first segment:
        # solving (0,0)+t(1,0) = (2,1)+u(0,-2) gives t=2, u=0.5.
        out = intersect_segment_segment(Segment(Point(0, 0), Point(1, 0)),
                                        Segment(Point(2, 1), Point(2, -1)))
        assert len(out) == 0

    def test_endpoint_touch_counts(self):
        out = intersect_segment_segment(Segment(Point(0, 0), Point(1, 1)),
                                        Segment(Point(1, 1), Point(2, 0)))
        assert pts(out) == [(1.0, 1.0)]

    def test_collinear_endpoint_touch(self):
        out = intersect_segment_segment(Segment(Point(0, 0), Point(1, 0)),
                                        Segment(Point(1, 0), Point(2, 0)))
        assert pts(out) == [(1.0, 0.0)]

    def test_collinear_overlap_raises(self):
        with pytest.raises(DegenerateOverlap):
            intersect_segment_segment(Segment(Point(0, 0), Point(2, 0)),
                                      Segment(Point(1, 0), Point(3, 0)))


class TestSegmentCircle:
    def test_chord(self):
        out = intersect_segment_circle(Segment(Point(-2, 0), Point(2, 0)),
                                       Circle(Point(0, 0), 1))
        assert pts(out) == [(-1.0, 0.0), (1.0, 0.0)]

    def test_tangent(self):
        out = intersect_segment_circle(Segment(Point(-2, 1), Point(2, 1)),
                                       Circle(Point(0, 0), 1))
        assert pts(out) == [(0.0, 1.0)]

    def test_one_endpoint_inside(self):
        seg = Segment(Point(2.5, -0.3), Point(-1.9, -0.1))
        circle = Circle(Point(1.6, -0.2), 2.0)
        # Independent containment check: one endpoint inside, one outside,
        # so the closed segment crosses the boundary exactly once.
        assert seg.a.distance_to(circle.center) < circle.radius
        assert seg.b.distance_to(circle.center) > circle.radius
        out = intersect_segment_circle(seg, circle)
        assert len(out) == 1
        p = out.points[0]
        assert abs(p.distance_to(circle.center) - circle.radius) < 1e-9

    def test_disjoint(self):
        out = intersect_segment_circle(Segment(Point(5, 5), Point(6, 6)),
                                       Circle(Point(0, 0), 1))
        assert len(out) == 0


class TestCircleCircle:
    def test_two_points(self):
        out = intersect_circle_circle(Circle(Point(0, 0), 2), Circle(Point(3, 0), 2))
        assert len(out) == 2
        for p in out:
            assert abs(p.distance_to(Point(0, 0)) - 2) < 1e-9
            assert abs(p.distance_to(Point(3, 0)) - 2) < 1e-9

    def test_disjoint(self):
        assert len(intersect_circle_circle(Circle(Point(0, 0), 2), Circle(Point(5, 0), 2))) == 0

    def test_external_tangency(self):
        out = intersect_circle_circle(Circle(Point(0, 0), 2), Circle(Point(4, 0), 2))
        assert pts(out) == [(2.0, 0.0)]

    def test_internal_tangency(self):
        out = intersect_circle_circle(Circle(Point(0, 0), 3), Circle(Point(1, 0), 2))
        assert pts(out) == [(3.0, 0.0)]

    def test_identical_raises(self):
        with pytest.raises(DegenerateOverlap):
            intersect_circle_circle(Circle(Point(0, 0), 2), Circle(Point(0, 0), 2))

    def test_concentric_distinct_empty(self):
        assert len(intersect_circle_circle(Circle(Point(0, 0), 2), Circle(Point(0, 0), 1))) == 0


class TestIntersectShapes:
    def test_circle_inside_square(self):
        square = Polygon((Point(-2, -2), Point(2, -2), Point(2, 2), Point(-2, 2)))
        assert len(intersect_shapes(Circle(Point(0, 0), 1), square)) == 0

    def test_segment_through_square(self):
        square = Polygon((Point(-1, -1), Point(1, -1), Point(1, 1), Point(-1, 1)))
        out = intersect_shapes(Segment(Point(-3, 0), Point(3, 0)), square)
        assert pts(out) == [(-1.0, 0.0), (1.0, 0.0)]

    def test_segment_into_triangle(self):
        tri = Polygon((Point(0, 0), Point(2, 0), Point(1, 2)))
        out = intersect_shapes(Segment(Point(1, -1), Point(1, 1)), tri)
        assert pts(out) == [(1.0, 0.0)]

    def test_shared_polygon_vertex_merges(self):
        # A segment passing exactly through a square's corner hits two edges
        # at the same point; it must be reported once.
        square = Polygon((Point(0, 0), Point(2, 0), Point(2, 2), Point(0, 2)))
        out = intersect_shapes(Segment(Point(-1, -1), Point(1, 1)), square)
        assert pts(out) == [(0.0, 0.0)]

    def test_same_object_rejected(self):
        c = Circle(Point(0, 0), 1)
        with pytest.raises(ValueError):
            intersect_shapes(c, c)

    def test_symmetry(self):
        a = Circle(Point(0.5, 0.5), 1.5)
        b = Polygon((Point(-1, -1), Point(2, -0.5), Point(0.5, 2)))
        assert intersect_shapes(a, b).matches(intersect_shapes(b, a))


class TestCountIntersections:
    def test_segment_below_circle(self):
        shapes = [Segment(Point(-0.1, -2.2), Point(-2.4, -2.4)), Circle(Point(1.8, 1.5), 2.0)]
        # The circle's lowest point is y = -0.5; the segment stays below y = -2.2.
        assert count_intersections(shapes) == (0, [0])

    def test_disjoint_circles(self):
        shapes = [Circle(Point(0, 0), 1), Circle(Point(10, 0), 1)]
        assert count_intersections(shapes) == (0, [0])

    def test_running_counts(self):
        shapes = [Circle(Point(0, 0), 2), Segment(Point(-3, 0), Point(3, 0)),
                  Segment(Point(0, -3), Point(0, 3))]
        assert count_intersections(shapes) == (5, [2, 3])

    def test_tangency_rejected(self):
        with pytest.raises(DegenerateConfiguration):
            count_intersections([Circle(Point(0, 0), 2), Circle(Point(4, 0), 2)])

    def test_endpoint_on_boundary_rejected(self):
        with pytest.raises(DegenerateConfiguration):
            count_intersections([Segment(Point(0, 0), Point(1, 0)), Segment(Point(0.5, 0), Point(0.5, 1))])

    def test_triple_point_rejected(self):
        shapes = [Segment(Point(-1, -1), Point(1, 1)), Segment(Point(-1, 1), Point(1, -1)),
                  Segment(Point(-1, 0), Point(1, 0))]
        with pytest.raises(DegenerateConfiguration):
            count_intersections(shapes)

    def test_overlap_rejected(self):
        with pytest.raises(DegenerateConfiguration):
            count_intersections([Segment(Point(0, 0), Point(2, 0)), Segment(Point(1, 0), Point(3, 0))])

    def test_margin_zero_skips_checks(self):
        total, per_step = count_intersections(
            [Circle(Point(0, 0), 2), Circle(Point(4, 0), 2)], margin=0)
        assert (total, per_step) == (1, [1])


class TestGenerator:
    def test_level_and_consistency(self):
        p = generate_problem(2, 7)
        assert p.level == 2 and len(p.shapes) == 2
        assert (p.answer, list(p.per_step_counts)) == count_intersections(p.shapes)

    def test_determinism(self):
        a = generate_problem(4, 991)
        b = generate_problem(4, 991)
        assert a == b
        assert format_problem(a) == format_problem(b)

    def test_different_seeds_differ(self):
        assert generate_problem(3, 1) != generate_problem(3, 2)

    @pytest.mark.parametrize("level", [2, 3, 4, 5, 6])
    def test_levels_generate_cleanly(self, level):
        for i in range(30):
            p = generate_problem(level, 500 + i)
            assert p.answer == sum(p.per_step_counts)
            assert count_intersections(p.shapes)[0] == p.answer

    def test_coordinates_on_grid(self):
        cfg = GeneratorConfig()
        p = generate_problem(5, 333, cfg)
        text = format_problem(p)
        assert parse_problem(text) == p

    def test_exhaustion_on_bad_config(self):
        # A one-point coordinate grid only ever yields identical circles.
        cfg = GeneratorConfig(coord_min=0.0, coord_max=0.0, radius_min=0.5,
                              radius_max=0.5, kinds=("circle",), max_attempts=50)
        with pytest.raises(GenerationExhausted):
            generate_problem(2, 1, cfg)

    def test_kind_weights(self):
        cfg = GeneratorConfig(kinds=("segment", "circle"), kind_weights=(1.0, 0.0))
        p = generate_problem(3, 77, cfg)
        assert all(isinstance(s, Segment) for s in p.shapes)


class TestCodec:
    def test_circle_sentence(self):
        p = GeometryProblem.from_shapes(
            [Circle(Point(1.8, 1.5), 2.0), Segment(Point(-0.1, -2.2), Point(-2.4, -2.4))])
        text = format_problem(p)
        assert "There is a circle centered at (1.8, 1.5) with radius 2.0." in text
        assert "There is a line segment from (-0.1, -2.2) to (-2.4, -2.4)." in text
        assert text.startswith("Find the number of intersection points")
        assert text.endswith("How many intersection points are there?")
        assert "  " not in text

    def test_polygon_sentence(self):
        p = GeometryProblem.from_shapes(
            [Polygon((Point(0.0, 0.0), Point(2.0, 0.0), Point(1.0, 2.0))), Circle(Point(0.1, 0.2), 0.5)])
        assert "There is a polygon with coordinates [(0.0, 0.0), (2.0, 0.0), (1.0, 2.0)]." in format_problem(p)

    def test_round_trip(self):
        for level in (2, 4, 6):
            p = generate_problem(level, 42 + level)
            assert parse_problem(format_problem(p)) == p

    def test_fig_caption_text_parses_without_preamble(self):
        text = ("There is a circle centered at (1.6, -0.2) with radius 2.0. "
                "There is a line segment from (2.5, -0.3) to (-1.9, -0.1). "
                "How many intersection points are there?")
        p = parse_problem(text)
        assert p.answer == 1

    def test_empty_string(self):
        with pytest.raises(ParseError):
            parse_problem("")

    def test_order_preserved(self):
        text = ("There is a line segment from (2.5, -0.3) to (-1.9, -0.1). "
                "There is a circle centered at (1.6, -0.2) with radius 2.0. "
                "How many intersection points are there?")
        p = parse_problem(text)
        assert isinstance(p.shapes[0], Segment) and isinstance(p.shapes[1], Circle)

    def test_garbage_sentence_offset(self):
        text = ("There is a circle centered at (1.6, -0.2) with radius 2.0. "
                "There is a dodecahedron. How many intersection points are there?")
        with pytest.raises(ParseError) as exc:
            parse_problem(text)
        assert exc.value.offset == text.index("There is a dodecahedron.")

    def test_trailing_garbage(self):
        p = generate_problem(2, 5)
        with pytest.raises(ParseError):
            parse_problem(format_problem(p) + " And more.")

    def test_answer_recomputed(self):
        p = generate_problem(3, 1234)
        q = parse_problem(format_problem(p))
        assert q.answer == p.answer and q.per_step_counts == p.per_step_counts
        assert q.seed is None


class TestInvariants:
    def test_validation(self):
        with pytest.raises(ValueError):
            Segment(Point(1, 1), Point(1, 1))
        with pytest.raises(ValueError):
            Circle(Point(0, 0), 0.0)
        with pytest.raises(ValueError):
            Polygon((Point(0, 0), Point(1, 0)))
        with pytest.raises(ValueError):
            Polygon((Point(0, 0), Point(1, 0), Point(2, 0)))
        with pytest.raises(ValueError):
            Polygon((Point(0, 0), Point(2, 0), Point(2, 2), Point(0, 0)))
        with pytest.raises(ValueError):
            # Bowtie self-intersection.
            Polygon((Point(0, 0), Point(2, 2), Point(2, 0), Point(0, 2)))
        with pytest.raises(ValueError):
            Point(float("nan"), 0.0)

    def test_merge_eps(self):
        merged = IntersectionSet.merged([Point(0, 0), Point(0, 1e-12), Point(0, 1)])
        assert len(merged) == 2

    @given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=2, max_value=6))
    @settings(max_examples=30, deadline=None)
    def test_chain_sum_property(self, seed, level):
        p = generate_problem(level, seed)
        assert p.answer == sum(p.per_step_counts)

    @given(st.integers(min_value=-20, max_value=20), st.integers(min_value=-20, max_value=20),
           st.integers(min_value=0, max_value=3000))
    @settings(max_examples=30, deadline=None)
    def test_translation_invariance(self, dx10, dy10, seed):
        dx, dy = dx10 / 10.0, dy10 / 10.0
        p = generate_problem(3, seed)
        moved = [translate_shape(s, dx, dy) for s in p.shapes]
        total, per_step = count_intersections(moved, margin=0)
        assert total == p.answer and tuple(per_step) == p.per_step_counts

    def test_global_distinct_count_matches_chain(self):
        for seed in range(40):
            p = generate_problem(5, 60_000 + seed)
            pts_all = []
            for i in range(len(p.shapes)):
                for j in range(i + 1, len(p.shapes)):
                    pts_all.extend(intersect_shapes(p.shapes[i], p.shapes[j]).points)
            assert len(IntersectionSet.merged(pts_all)) == p.answer
