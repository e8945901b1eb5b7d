"""2D shapes, intersection counting, and grid-based problem generation.

Shapes live in world coordinates quantized to one decimal digit. All
intersection math runs in double precision; the generator rejects any
configuration that comes within ``GENERAL_POSITION_MARGIN`` of a tangency,
overlap, triple point, or endpoint-on-boundary coincidence, so downstream
counting never has to decide a borderline case.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

# Two intersection points closer than this are considered the same point.
MERGE_EPS = 1e-9
# Configurations within this margin of a degeneracy are rejected by the
# generator and refused by the counter.
GENERAL_POSITION_MARGIN = 1e-6
# Slack on segment parameters so that exact endpoint touches are included.
_PARAM_EPS = 1e-9


class GeometryError(Exception):
    """Base class for geometry failures."""


class DegenerateOverlap(GeometryError):
    """Two primitives share infinitely many points (collinear overlap, identical circles)."""


class DegenerateConfiguration(GeometryError):
    """A shape set is within the general-position margin of a degeneracy."""


class GenerationExhausted(GeometryError):
    """Rejection sampling failed too many consecutive times."""


class ParseError(GeometryError):
    """Question text does not match the expected format."""

    def __init__(self, message: str, offset: int = 0, sentence: str = ""):
        self.offset = offset
        self.sentence = sentence
        detail = f" at offset {offset}" + (f": {sentence!r}" if sentence else "")
        super().__init__(message + detail)


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite point ({self.x}, {self.y})")

    def distance_to(self, other: "Point") -> float:
        return math.sqrt((self.x - other.x) ** 2 + (self.y - other.y) ** 2)


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("segment endpoints must differ")

    @property
    def length(self) -> float:
        return self.a.distance_to(self.b)


@dataclass(frozen=True)
class Circle:
    center: Point
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"circle radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class Polygon:
    vertices: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        v = self.vertices
        if len(v) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        if len(set((p.x, p.y) for p in v)) != len(v):
            raise ValueError("polygon has repeated vertices")
        if abs(_shoelace(v)) < 1e-12:
            raise ValueError("polygon has zero area")
        if not _is_simple(v):
            raise ValueError("polygon is self-intersecting")

    @property
    def edges(self) -> tuple[Segment, ...]:
        v = self.vertices
        return tuple(Segment(v[i], v[(i + 1) % len(v)]) for i in range(len(v)))


Shape = Union[Segment, Circle, Polygon]


def _shoelace(vertices: Sequence[Point]) -> float:
    total = 0.0
    for i, p in enumerate(vertices):
        q = vertices[(i + 1) % len(vertices)]
        total += p.x * q.y - q.x * p.y
    return 0.5 * total


def _cross(ax: float, ay: float, bx: float, by: float) -> float:
    return ax * by - ay * bx


def _is_simple(v: Sequence[Point]) -> bool:
    n = len(v)
    for i in range(n):
        a1, b1 = v[i], v[(i + 1) % n]
        for j in range(i + 1, n):
            a2, b2 = v[j], v[(j + 1) % n]
            adjacent = (j == i + 1) or (i == 0 and j == n - 1)
            if adjacent:
                # Shared vertex is fine; a spike folding back along the
                # incoming edge is not.
                shared = b1 if j == i + 1 else a1
                p = a1 if shared == b1 else b1
                q = b2 if shared == a2 else a2
                cr = _cross(p.x - shared.x, p.y - shared.y, q.x - shared.x, q.y - shared.y)
                dot = (p.x - shared.x) * (q.x - shared.x) + (p.y - shared.y) * (q.y - shared.y)
                if abs(cr) < 1e-12 and dot > 0:
                    return False
                continue
            if _segments_touch(a1, b1, a2, b2):
                return False
    return True


def _segments_touch(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    """Closed-segment intersection test used only for simplicity checking."""
    d1 = _cross(p2.x - p1.x, p2.y - p1.y, q1.x - p1.x, q1.y - p1.y)
    d2 = _cross(p2.x - p1.x, p2.y - p1.y, q2.x - p1.x, q2.y - p1.y)
    d3 = _cross(q2.x - q1.x, q2.y - q1.y, p1.x - q1.x, p1.y - q1.y)
    d4 = _cross(q2.x - q1.x, q2.y - q1.y, p2.x - q1.x, p2.y - q1.y)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
        return True
    for d, p, (a, b) in ((d1, q1, (p1, p2)), (d2, q2, (p1, p2)), (d3, p1, (q1, q2)), (d4, p2, (q1, q2))):
        if abs(d) < 1e-12 and _on_segment_box(a, p, b):
            return True
    return False


def _on_segment_box(a: Point, p: Point, b: Point) -> bool:
    return (min(a.x, b.x) - 1e-12 <= p.x <= max(a.x, b.x) + 1e-12
            and min(a.y, b.y) - 1e-12 <= p.y <= max(a.y, b.y) + 1e-12)


@dataclass(frozen=True)
class IntersectionSet:
    """Distinct intersection points, pairwise separated by more than MERGE_EPS."""

    points: tuple[Point, ...] = ()

    @classmethod
    def merged(cls, points: Sequence[Point], eps: float = MERGE_EPS) -> "IntersectionSet":
        kept: list[Point] = []
        for p in points:
            if all(p.distance_to(q) > eps for q in kept):
                kept.append(p)
        return cls(tuple(kept))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def matches(self, other: "IntersectionSet", eps: float = 1e-7) -> bool:
        """Set equality under eps-matching of points."""
        if len(self) != len(other):
            return False
        remaining = list(other.points)
        for p in self.points:
            for i, q in enumerate(remaining):
                if p.distance_to(q) <= eps:
                    del remaining[i]
                    break
            else:
                return False
        return True


def intersect_segment_segment(s1: Segment, s2: Segment) -> IntersectionSet:
    """0 or 1 intersection of two closed segments; endpoint touches count.

    Raises DegenerateOverlap when the segments are collinear with an
    overlapping extent of positive length.
    """
    p, q = s1.a, s2.a
    rx, ry = s1.b.x - p.x, s1.b.y - p.y
    sx, sy = s2.b.x - q.x, s2.b.y - q.y
    qpx, qpy = q.x - p.x, q.y - p.y
    denom = _cross(rx, ry, sx, sy)
    rlen = math.sqrt(rx * rx + ry * ry)
    slen = math.sqrt(sx * sx + sy * sy)
    if abs(denom) <= 1e-12 * rlen * slen:
        # Parallel. Collinear only if s2's anchor sits on s1's line.
        if abs(_cross(qpx, qpy, rx, ry)) > 1e-12 * rlen * max(slen, math.sqrt(qpx * qpx + qpy * qpy), 1.0):
            return IntersectionSet()
        rr = rx * rx + ry * ry
        t0 = (qpx * rx + qpy * ry) / rr
        t1 = t0 + (sx * rx + sy * ry) / rr
        lo, hi = min(t0, t1), max(t0, t1)
        ov_lo, ov_hi = max(0.0, lo), min(1.0, hi)
        if ov_hi - ov_lo > _PARAM_EPS:
            raise DegenerateOverlap("collinear segments with overlapping extent")
        if ov_hi - ov_lo >= -_PARAM_EPS:
            t = 0.5 * (ov_lo + ov_hi)
            return IntersectionSet((Point(p.x + t * rx, p.y + t * ry),))
        return IntersectionSet()
    t = _cross(qpx, qpy, sx, sy) / denom
    u = _cross(qpx, qpy, rx, ry) / denom
    if -_PARAM_EPS <= t <= 1 + _PARAM_EPS and -_PARAM_EPS <= u <= 1 + _PARAM_EPS:
        return IntersectionSet((Point(p.x + t * rx, p.y + t * ry),))
    return IntersectionSet()


def intersect_segment_circle(s: Segment, c: Circle) -> IntersectionSet:
    """0, 1, or 2 points where a closed segment meets a circle boundary."""
    dx, dy = s.b.x - s.a.x, s.b.y - s.a.y
    fx, fy = s.a.x - c.center.x, s.a.y - c.center.y
    aa = dx * dx + dy * dy
    bb = 2.0 * (fx * dx + fy * dy)
    cc = fx * fx + fy * fy - c.radius * c.radius
    disc = bb * bb - 4.0 * aa * cc
    tol = 1e-12 * max(1.0, bb * bb, abs(4.0 * aa * cc))
    pts: list[Point] = []
    if disc < -tol:
        return IntersectionSet()
    if disc <= tol:
        roots = [-bb / (2.0 * aa)]
    else:
        sq = math.sqrt(max(disc, 0.0))
        roots = [(-bb - sq) / (2.0 * aa), (-bb + sq) / (2.0 * aa)]
    for t in roots:
        if -_PARAM_EPS <= t <= 1 + _PARAM_EPS:
            pts.append(Point(s.a.x + t * dx, s.a.y + t * dy))
    return IntersectionSet.merged(pts)


def intersect_circle_circle(c1: Circle, c2: Circle) -> IntersectionSet:
    """0, 1, or 2 points via the radical-line construction.

    Raises DegenerateOverlap for identical circles.
    """
    dx, dy = c2.center.x - c1.center.x, c2.center.y - c1.center.y
    d2 = dx * dx + dy * dy
    d = math.sqrt(d2)
    if d <= MERGE_EPS:
        if abs(c1.radius - c2.radius) <= MERGE_EPS:
            raise DegenerateOverlap("identical circles")
        return IntersectionSet()
    a = (c1.radius * c1.radius - c2.radius * c2.radius + d2) / (2.0 * d)
    h2 = c1.radius * c1.radius - a * a
    tol = 1e-12 * max(1.0, c1.radius * c1.radius, d2)
    if h2 < -tol:
        return IntersectionSet()
    mx = c1.center.x + a * dx / d
    my = c1.center.y + a * dy / d
    if h2 <= tol:
        return IntersectionSet((Point(mx, my),))
    h = math.sqrt(h2)
    ox, oy = -dy * h / d, dx * h / d
    return IntersectionSet((Point(mx + ox, my + oy), Point(mx - ox, my - oy)))


def _primitives(shape: Shape) -> list[Union[Segment, Circle]]:
    if isinstance(shape, Polygon):
        return list(shape.edges)
    return [shape]


def _intersect_primitives(a: Union[Segment, Circle], b: Union[Segment, Circle]) -> IntersectionSet:
    if isinstance(a, Segment) and isinstance(b, Segment):
        return intersect_segment_segment(a, b)
    if isinstance(a, Segment) and isinstance(b, Circle):
        return intersect_segment_circle(a, b)
    if isinstance(a, Circle) and isinstance(b, Segment):
        return intersect_segment_circle(b, a)
    return intersect_circle_circle(a, b)


def intersect_shapes(a: Shape, b: Shape) -> IntersectionSet:
    """All distinct points where the boundaries of two shapes meet.

    Polygons are decomposed into their edges; points within MERGE_EPS of
    each other (shared polygon vertices) merge into one.
    """
    if a is b:
        raise ValueError("intersect_shapes requires two distinct shape objects")
    pts: list[Point] = []
    for pa in _primitives(a):
        for pb in _primitives(b):
            pts.extend(_intersect_primitives(pa, pb).points)
    return IntersectionSet.merged(pts)


def _point_segment_distance(p: Point, s: Segment) -> float:
    dx, dy = s.b.x - s.a.x, s.b.y - s.a.y
    px, py = p.x - s.a.x, p.y - s.a.y
    t = (px * dx + py * dy) / (dx * dx + dy * dy)
    t = min(1.0, max(0.0, t))
    ex, ey = px - t * dx, py - t * dy
    return math.sqrt(ex * ex + ey * ey)


def _check_primitive_pair(a: Union[Segment, Circle], b: Union[Segment, Circle], margin: float) -> None:
    """Raise DegenerateConfiguration if a/b are within margin of a fragile case."""
    if isinstance(a, Circle) and isinstance(b, Circle):
        dx, dy = b.center.x - a.center.x, b.center.y - a.center.y
        d = math.sqrt(dx * dx + dy * dy)
        if d < margin and abs(a.radius - b.radius) < margin:
            raise DegenerateConfiguration("near-identical circles")
        if abs(d - (a.radius + b.radius)) < margin or abs(d - abs(a.radius - b.radius)) < margin:
            raise DegenerateConfiguration("near-tangent circles")
        return
    if isinstance(a, Circle) or isinstance(b, Circle):
        seg, cir = (b, a) if isinstance(a, Circle) else (a, b)
        for e in (seg.a, seg.b):
            if abs(e.distance_to(cir.center) - cir.radius) < margin:
                raise DegenerateConfiguration("segment endpoint near circle boundary")
        dx, dy = seg.b.x - seg.a.x, seg.b.y - seg.a.y
        t = ((cir.center.x - seg.a.x) * dx + (cir.center.y - seg.a.y) * dy) / (dx * dx + dy * dy)
        if 0.0 <= t <= 1.0:
            foot = Point(seg.a.x + t * dx, seg.a.y + t * dy)
            if abs(foot.distance_to(cir.center) - cir.radius) < margin:
                raise DegenerateConfiguration("segment near-tangent to circle")
        return
    # Segment vs segment.
    rx, ry = a.b.x - a.a.x, a.b.y - a.a.y
    sx, sy = b.b.x - b.a.x, b.b.y - b.a.y
    rlen, slen = math.sqrt(rx * rx + ry * ry), math.sqrt(sx * sx + sy * sy)
    if abs(_cross(rx, ry, sx, sy)) < margin * rlen * slen:
        da = abs(_cross(rx, ry, b.a.x - a.a.x, b.a.y - a.a.y)) / rlen
        db = abs(_cross(rx, ry, b.b.x - a.a.x, b.b.y - a.a.y)) / rlen
        if da < margin and db < margin:
            t0 = ((b.a.x - a.a.x) * rx + (b.a.y - a.a.y) * ry) / (rlen * rlen)
            t1 = ((b.b.x - a.a.x) * rx + (b.b.y - a.a.y) * ry) / (rlen * rlen)
            if min(1.0, max(t0, t1)) - max(0.0, min(t0, t1)) > -margin / rlen:
                raise DegenerateConfiguration("near-collinear overlapping segments")
    for e in (a.a, a.b):
        if _point_segment_distance(e, b) < margin:
            raise DegenerateConfiguration("segment endpoint near other segment")
    for e in (b.a, b.b):
        if _point_segment_distance(e, a) < margin:
            raise DegenerateConfiguration("segment endpoint near other segment")


def check_general_position(shapes: Sequence[Shape], margin: float = GENERAL_POSITION_MARGIN) -> None:
    """Raise DegenerateConfiguration unless every pair is margin-far from fragile cases."""
    prims = [(_primitives(s), i) for i, s in enumerate(shapes)]
    for i in range(len(shapes)):
        for j in range(i + 1, len(shapes)):
            for pa in prims[i][0]:
                for pb in prims[j][0]:
                    try:
                        _check_primitive_pair(pa, pb, margin)
                    except DegenerateOverlap:
                        raise DegenerateConfiguration("overlapping primitives")
    # Triple points: intersection points of distinct shape pairs must not
    # coincide (or nearly coincide) anywhere.
    tagged: list[tuple[int, int, Point]] = []
    for i in range(len(shapes)):
        for j in range(i + 1, len(shapes)):
            try:
                pts = intersect_shapes(shapes[i], shapes[j])
            except DegenerateOverlap:
                raise DegenerateConfiguration("overlapping shapes")
            tagged.extend((i, j, p) for p in pts)
    for m in range(len(tagged)):
        for n in range(m + 1, len(tagged)):
            if tagged[m][2].distance_to(tagged[n][2]) < margin:
                raise DegenerateConfiguration("near-coincident intersection points")


@dataclass(frozen=True)
class GeometryProblem:
    """An ordered shape set with its intersection count and per-step running counts."""

    shapes: tuple[Shape, ...]
    answer: int
    per_step_counts: tuple[int, ...]
    level: int
    seed: int | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "shapes", tuple(self.shapes))
        object.__setattr__(self, "per_step_counts", tuple(self.per_step_counts))
        if not 2 <= self.level <= 6:
            raise ValueError(f"level must be in [2, 6], got {self.level}")
        if self.level != len(self.shapes):
            raise ValueError("level must equal the number of shapes")
        if len(self.per_step_counts) != len(self.shapes) - 1:
            raise ValueError("need one per-step count per shape after the first")
        if self.answer != sum(self.per_step_counts):
            raise ValueError("answer must equal the sum of per-step counts")
        for v in _shape_coordinates(self.shapes):
            if abs(v * 10 - round(v * 10)) > 1e-6:
                raise ValueError(f"coordinate {v} is not on the one-decimal grid")

    @classmethod
    def from_shapes(cls, shapes: Sequence[Shape], seed: int | None = None,
                    margin: float = GENERAL_POSITION_MARGIN) -> "GeometryProblem":
        answer, counts = count_intersections(shapes, margin=margin)
        return cls(tuple(shapes), answer, tuple(counts), len(shapes), seed)


def _shape_coordinates(shapes: Sequence[Shape]) -> Iterator[float]:
    for s in shapes:
        if isinstance(s, Segment):
            yield from (s.a.x, s.a.y, s.b.x, s.b.y)
        elif isinstance(s, Circle):
            yield from (s.center.x, s.center.y, s.radius)
        else:
            for p in s.vertices:
                yield from (p.x, p.y)


def count_intersections(problem: Union[GeometryProblem, Sequence[Shape]],
                        margin: float = GENERAL_POSITION_MARGIN) -> tuple[int, list[int]]:
    """Total and per-step distinct intersection counts for an ordered shape set.

    Step k counts the distinct points where shape k+1 meets the union of
    shapes 0..k. With margin > 0 the configuration is first checked for
    general position and DegenerateConfiguration is raised otherwise.
    """
    shapes = problem.shapes if isinstance(problem, GeometryProblem) else tuple(problem)
    if margin > 0:
        check_general_position(shapes, margin)
    per_step: list[int] = []
    for k in range(1, len(shapes)):
        pts: list[Point] = []
        for j in range(k):
            pts.extend(intersect_shapes(shapes[k], shapes[j]).points)
        per_step.append(len(IntersectionSet.merged(pts)))
    return sum(per_step), per_step


@dataclass(frozen=True)
class GeneratorConfig:
    """Sampling ranges and rejection policy for problem generation.

    Coordinates and radii are drawn from one-decimal grids; the bounds
    default to the ranges observed in published task instances.
    """

    coord_min: float = -3.0
    coord_max: float = 3.0
    radius_min: float = 0.5
    radius_max: float = 2.5
    kinds: tuple[str, ...] = ("segment", "circle", "triangle", "rectangle")
    kind_weights: tuple[float, ...] | None = None
    margin: float = GENERAL_POSITION_MARGIN
    max_attempts: int = 10_000

    def __post_init__(self):
        if self.coord_max < self.coord_min:
            raise ValueError("coord_max must not be below coord_min")
        if self.radius_max < self.radius_min or self.radius_min <= 0:
            raise ValueError("radius range must be positive")
        if self.margin <= 0:
            raise ValueError("margin must be positive")
        unknown = set(self.kinds) - {"segment", "circle", "triangle", "rectangle"}
        if unknown:
            raise ValueError(f"unknown shape kinds: {sorted(unknown)}")
        if self.kind_weights is not None and len(self.kind_weights) != len(self.kinds):
            raise ValueError("kind_weights must match kinds")


def _draw_tenths(rng: random.Random, lo: float, hi: float) -> float:
    lo10, hi10 = round(lo * 10), round(hi * 10)
    return rng.randrange(lo10, hi10 + 1) / 10.0


def _draw_grid_point(rng: random.Random, cfg: GeneratorConfig) -> Point:
    return Point(_draw_tenths(rng, cfg.coord_min, cfg.coord_max),
                 _draw_tenths(rng, cfg.coord_min, cfg.coord_max))


def _draw_kind(rng: random.Random, cfg: GeneratorConfig) -> str:
    if cfg.kind_weights is None:
        return cfg.kinds[rng.randrange(len(cfg.kinds))]
    total = sum(cfg.kind_weights)
    x = rng.random() * total
    acc = 0.0
    for kind, w in zip(cfg.kinds, cfg.kind_weights):
        acc += w
        if x < acc:
            return kind
    return cfg.kinds[-1]


def _draw_shape(rng: random.Random, cfg: GeneratorConfig) -> Shape:
    for _ in range(1000):
        kind = _draw_kind(rng, cfg)
        if kind == "segment":
            a, b = _draw_grid_point(rng, cfg), _draw_grid_point(rng, cfg)
            if a != b:
                return Segment(a, b)
        elif kind == "circle":
            return Circle(_draw_grid_point(rng, cfg), _draw_tenths(rng, cfg.radius_min, cfg.radius_max))
        elif kind == "triangle":
            a, b, c = (_draw_grid_point(rng, cfg) for _ in range(3))
            area2 = _cross(b.x - a.x, b.y - a.y, c.x - a.x, c.y - a.y)
            if abs(area2) > 0.005:
                return Polygon((a, b, c))
        else:
            x1, x2 = _draw_tenths(rng, cfg.coord_min, cfg.coord_max), _draw_tenths(rng, cfg.coord_min, cfg.coord_max)
            y1, y2 = _draw_tenths(rng, cfg.coord_min, cfg.coord_max), _draw_tenths(rng, cfg.coord_min, cfg.coord_max)
            if x1 != x2 and y1 != y2:
                lx, hx, ly, hy = min(x1, x2), max(x1, x2), min(y1, y2), max(y1, y2)
                return Polygon((Point(lx, ly), Point(hx, ly), Point(hx, hy), Point(lx, hy)))
    raise GenerationExhausted("could not draw a valid shape; check the configured ranges")


def generate_problem(level: int, seed: int, config: GeneratorConfig | None = None) -> GeometryProblem:
    """Deterministically sample a general-position problem with `level` shapes."""
    if not 2 <= level <= 6:
        raise ValueError(f"level must be in [2, 6], got {level}")
    cfg = config or GeneratorConfig()
    rng = random.Random(seed)
    failures = 0
    while True:
        shapes = tuple(_draw_shape(rng, cfg) for _ in range(level))
        try:
            answer, counts = count_intersections(shapes, margin=cfg.margin)
        except (DegenerateConfiguration, DegenerateOverlap):
            failures += 1
            if failures >= cfg.max_attempts:
                raise GenerationExhausted(
                    f"{failures} consecutive rejections at level {level}; check the configured ranges")
            continue
        return GeometryProblem(shapes, answer, tuple(counts), level, seed)


_PREAMBLE = ("Find the number of intersection points between the shapes "
             "and lines specified by the coordinates given.")
_QUESTION = "How many intersection points are there?"


def _fmt(v: float) -> str:
    return f"{v:.1f}"


def shape_phrase(shape: Shape) -> str:
    """Sentence body describing one shape, shared by the text and sketch codecs."""
    if isinstance(shape, Segment):
        return (f"line segment from ({_fmt(shape.a.x)}, {_fmt(shape.a.y)}) "
                f"to ({_fmt(shape.b.x)}, {_fmt(shape.b.y)})")
    if isinstance(shape, Circle):
        return (f"circle centered at ({_fmt(shape.center.x)}, {_fmt(shape.center.y)}) "
                f"with radius {_fmt(shape.radius)}")
    coords = ", ".join(f"({_fmt(p.x)}, {_fmt(p.y)})" for p in shape.vertices)
    return f"polygon with coordinates [{coords}]"


def format_problem(problem: GeometryProblem) -> str:
    """Render the question text: preamble, one sentence per shape, question."""
    parts = [_PREAMBLE]
    parts.extend(f"There is a {shape_phrase(s)}." for s in problem.shapes)
    parts.append(_QUESTION)
    return " ".join(parts)


_NUM = r"-?\d+\.\d"
_SEG_RE = re.compile(rf"There is a line segment from \(({_NUM}), ({_NUM})\) to \(({_NUM}), ({_NUM})\)\.")
_CIRCLE_RE = re.compile(rf"There is a circle centered at \(({_NUM}), ({_NUM})\) with radius ({_NUM})\.")
_POLY_RE = re.compile(rf"There is a polygon with coordinates \[((?:\({_NUM}, {_NUM}\)(?:, )?)+)\]\.")
_PAIR_RE = re.compile(rf"\(({_NUM}), ({_NUM})\)")


def parse_problem(text: str, margin: float = GENERAL_POSITION_MARGIN) -> GeometryProblem:
    """Parse question text back into a problem; counts are recomputed.

    The leading preamble sentence is optional so that externally sourced
    question text can be ingested as-is.
    """
    pos = 0
    text_len = len(text)
    if text.startswith(_PREAMBLE):
        pos = len(_PREAMBLE)
    shapes: list[Shape] = []
    while True:
        while pos < text_len and text[pos] == " ":
            pos += 1
        if pos >= text_len:
            raise ParseError("text ended before the closing question", pos)
        if text.startswith(_QUESTION, pos):
            pos += len(_QUESTION)
            break
        m = _SEG_RE.match(text, pos)
        if m:
            shapes.append(Segment(Point(float(m.group(1)), float(m.group(2))),
                                  Point(float(m.group(3)), float(m.group(4)))))
            pos = m.end()
            continue
        m = _CIRCLE_RE.match(text, pos)
        if m:
            shapes.append(Circle(Point(float(m.group(1)), float(m.group(2))), float(m.group(3))))
            pos = m.end()
            continue
        m = _POLY_RE.match(text, pos)
        if m:
            pts = tuple(Point(float(a), float(b)) for a, b in _PAIR_RE.findall(m.group(1)))
            try:
                shapes.append(Polygon(pts))
            except ValueError as exc:
                raise ParseError(str(exc), pos, _sentence_at(text, pos)) from exc
            pos = m.end()
            continue
        raise ParseError("unrecognized sentence", pos, _sentence_at(text, pos))
    if text[pos:].strip():
        raise ParseError("trailing content after the question", pos, _sentence_at(text, pos))
    if not 2 <= len(shapes) <= 6:
        raise ParseError(f"expected 2 to 6 shapes, found {len(shapes)}", pos)
    try:
        return GeometryProblem.from_shapes(shapes, margin=margin)
    except GeometryError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc), pos) from exc


def _sentence_at(text: str, pos: int) -> str:
    end = text.find(".", pos)
    return text[pos:end + 1 if end >= 0 else min(pos + 80, len(text))]


def translate_shape(shape: Shape, dx: float, dy: float) -> Shape:
    if isinstance(shape, Segment):
        return Segment(Point(shape.a.x + dx, shape.a.y + dy), Point(shape.b.x + dx, shape.b.y + dy))
    if isinstance(shape, Circle):
        return Circle(Point(shape.center.x + dx, shape.center.y + dy), shape.radius)
    return Polygon(tuple(Point(p.x + dx, p.y + dy) for p in shape.vertices))


def bounding_box(shapes: Sequence[Shape]) -> tuple[float, float, float, float]:
    """(min_x, min_y, max_x, max_y) over all shape extents."""
    xs: list[float] = []
    ys: list[float] = []
    for s in shapes:
        if isinstance(s, Circle):
            xs.extend((s.center.x - s.radius, s.center.x + s.radius))
            ys.extend((s.center.y - s.radius, s.center.y + s.radius))
        elif isinstance(s, Segment):
            xs.extend((s.a.x, s.b.x))
            ys.extend((s.a.y, s.b.y))
        else:
            xs.extend(p.x for p in s.vertices)
            ys.extend(p.y for p in s.vertices)
    return min(xs), min(ys), max(xs), max(ys)
