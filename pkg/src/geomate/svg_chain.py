"""Sketch-chain documents: a closed SVG dialect with instruction comments.

A document is an ordered list of comments and drawable elements inside one
viewbox. ``<!--Image-->`` comments mark the points at which the cumulative
drawing is rasterized; emitters for both tasks produce documents in this
dialect, and the parser reads exactly what the serializer writes.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Union

from . import chess_engine
from .geometry import (
    Circle,
    GeometryProblem,
    Point,
    Polygon,
    Segment,
    Shape,
    bounding_box,
    shape_phrase,
)

IMAGE_MARKER = "Image"

# Grays used on the chess board; squares differ from both piece fills.
LIGHT_SQUARE_GRAY = 200
DARK_SQUARE_GRAY = 120
WHITE_PIECE_GRAY = 255
BLACK_PIECE_GRAY = 0


class SvgError(Exception):
    """Base class for document failures."""


class SvgParseError(SvgError):
    def __init__(self, message: str, offset: int = 0):
        self.offset = offset
        super().__init__(f"{message} at offset {offset}")


class UnsupportedElement(SvgError):
    """An element kind outside the supported dialect."""


@dataclass(frozen=True)
class Comment:
    text: str


@dataclass(frozen=True)
class Line:
    a: Point
    b: Point
    gray: int = 0


@dataclass(frozen=True)
class CircleEl:
    center: Point
    radius: float
    gray: int = 0


@dataclass(frozen=True)
class Polyline:
    points: tuple[Point, ...]
    closed: bool = False
    gray: int = 0

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))


@dataclass(frozen=True)
class Rect:
    origin: Point
    width: float
    height: float
    fill: int


@dataclass(frozen=True)
class SymbolDef:
    symbol_id: str
    outline: tuple[Polyline, ...]
    fill: int

    def __post_init__(self):
        object.__setattr__(self, "outline", tuple(self.outline))


@dataclass(frozen=True)
class Use:
    symbol_id: str
    at: tuple[int, int]


SvgElement = Union[Line, CircleEl, Polyline, Rect, SymbolDef, Use]
SvgItem = Union[Comment, SvgElement]


@dataclass(frozen=True)
class SvgDocument:
    viewbox: tuple[float, float, float, float]
    items: tuple[SvgItem, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))

    def markers(self) -> list[int]:
        return [i for i, item in enumerate(self.items)
                if isinstance(item, Comment) and item.text.strip() == IMAGE_MARKER]


def _num(v: float) -> str:
    if isinstance(v, int) or float(v).is_integer():
        return repr(int(v))
    return repr(float(v))


def _gray_attr(gray: int) -> str:
    if gray == 0:
        return "black"
    if gray == 255:
        return "white"
    return f"rgb({gray},{gray},{gray})"


def _parse_gray(value: str) -> int:
    value = value.strip()
    if value == "black":
        return 0
    if value == "white":
        return 255
    m = re.match(r"rgb\((\d+),\s*(\d+),\s*(\d+)\)$", value)
    if m and m.group(1) == m.group(2) == m.group(3):
        return int(m.group(1))
    raise SvgParseError(f"unsupported color {value!r}")


def _points_attr(points: Iterable[Point]) -> str:
    return " ".join(f"{_num(p.x)},{_num(p.y)}" for p in points)


def _stroke_width(viewbox) -> float:
    # Matches the raster look: a 2-pixel stroke at 512x512.
    return round(2.0 * min(viewbox[2], viewbox[3]) / 512.0, 6)


def serialize(doc: SvgDocument) -> str:
    vb = " ".join(_num(v) for v in doc.viewbox)
    sw = _num(_stroke_width(doc.viewbox))
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{vb}">']
    for item in doc.items:
        out.append(_serialize_item(item, sw))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _serialize_item(item: SvgItem, sw: str) -> str:
    if isinstance(item, Comment):
        return f"<!--{item.text}-->"
    if isinstance(item, Line):
        return (f'<line x1="{_num(item.a.x)}" y1="{_num(item.a.y)}" x2="{_num(item.b.x)}" '
                f'y2="{_num(item.b.y)}" stroke="{_gray_attr(item.gray)}" stroke-width="{sw}"/>')
    if isinstance(item, CircleEl):
        return (f'<circle cx="{_num(item.center.x)}" cy="{_num(item.center.y)}" r="{_num(item.radius)}" '
                f'stroke="{_gray_attr(item.gray)}" stroke-width="{sw}" fill="none"/>')
    if isinstance(item, Polyline):
        tag = "polygon" if item.closed else "polyline"
        return (f'<{tag} points="{_points_attr(item.points)}" stroke="{_gray_attr(item.gray)}" '
                f'stroke-width="{sw}" fill="none"/>')
    if isinstance(item, Rect):
        return (f'<rect x="{_num(item.origin.x)}" y="{_num(item.origin.y)}" width="{_num(item.width)}" '
                f'height="{_num(item.height)}" fill="{_gray_attr(item.fill)}"/>')
    if isinstance(item, SymbolDef):
        polys = "".join(f'<polygon points="{_points_attr(p.points)}" fill="{_gray_attr(item.fill)}"/>'
                        for p in item.outline)
        return f'<symbol id="{item.symbol_id}" overflow="visible">{polys}</symbol>'
    if isinstance(item, Use):
        return f'<use href="#{item.symbol_id}" x="{_num(item.at[0])}" y="{_num(item.at[1])}"/>'
    raise UnsupportedElement(f"cannot serialize {type(item).__name__}")


_TOKEN_RE = re.compile(r"<!--(.*?)-->|<\?[^>]*\?>|<(/?)([A-Za-z][\w:-]*)((?:[^>\"]|\"[^\"]*\")*?)(/?)>",
                       re.DOTALL)
_ATTR_RE = re.compile(r'([\w:-]+)\s*=\s*"([^"]*)"')


def parse(text: str) -> SvgDocument:
    """Parse a document in the emitted dialect back into its model."""
    viewbox = None
    items: list[SvgItem] = []
    symbol: dict | None = None
    saw_svg = False
    pos = 0
    for m in _TOKEN_RE.finditer(text):
        if text[pos:m.start()].strip():
            raise SvgParseError("unexpected text content", pos)
        pos = m.end()
        if m.group(1) is not None:
            items.append(Comment(m.group(1)))
            continue
        if m.group(0).startswith("<?"):
            continue
        closing, tag, attr_text, self_closed = m.group(2), m.group(3), m.group(4), m.group(5)
        tag = tag.lower()
        if closing:
            if tag == "svg":
                break
            if tag == "symbol":
                if symbol is None:
                    raise SvgParseError("stray </symbol>", m.start())
                items.append(SymbolDef(symbol["id"], tuple(symbol["outline"]), symbol["fill"]))
                symbol = None
                continue
            raise SvgParseError(f"unexpected closing tag {tag!r}", m.start())
        attrs = dict(_ATTR_RE.findall(attr_text))
        try:
            element = _parse_element(tag, attrs, symbol)
        except (KeyError, ValueError) as exc:
            raise SvgParseError(f"bad <{tag}> attributes: {exc}", m.start()) from exc
        if tag == "svg":
            saw_svg = True
            viewbox = element
            continue
        if tag == "symbol":
            symbol = element
            if self_closed:
                raise SvgParseError("empty symbol", m.start())
            continue
        if element is not None:
            if symbol is not None:
                if not isinstance(element, Polyline):
                    raise UnsupportedElement(f"<{tag}> inside a symbol")
                symbol["outline"].append(element)
                if "fill" in attrs:
                    symbol["fill"] = _parse_gray(attrs["fill"])
            else:
                items.append(element)
    if text[pos:].strip():
        raise SvgParseError("trailing content", pos)
    if not saw_svg or viewbox is None:
        raise SvgParseError("missing <svg> root with viewBox", 0)
    if symbol is not None:
        raise SvgParseError("unterminated symbol", len(text))
    return SvgDocument(tuple(viewbox), tuple(items))


def _parse_element(tag: str, attrs: dict[str, str], symbol):
    if tag == "svg":
        vb = attrs["viewBox"].split()
        if len(vb) != 4:
            raise ValueError(f"viewBox needs 4 numbers, got {attrs['viewBox']!r}")
        return tuple(float(v) for v in vb)
    if tag == "line":
        return Line(Point(float(attrs["x1"]), float(attrs["y1"])),
                    Point(float(attrs["x2"]), float(attrs["y2"])),
                    _parse_gray(attrs.get("stroke", "black")))
    if tag == "circle":
        return CircleEl(Point(float(attrs["cx"]), float(attrs["cy"])), float(attrs["r"]),
                        _parse_gray(attrs.get("stroke", "black")))
    if tag in ("polyline", "polygon"):
        pts = tuple(Point(float(x), float(y))
                    for x, y in re.findall(r"(-?[\d.eE+]+)[,\s]\s*(-?[\d.eE+]+)", attrs["points"]))
        if symbol is not None:
            return Polyline(pts, closed=tag == "polygon")
        return Polyline(pts, closed=tag == "polygon", gray=_parse_gray(attrs.get("stroke", "black")))
    if tag == "rect":
        return Rect(Point(float(attrs["x"]), float(attrs["y"])),
                    float(attrs["width"]), float(attrs["height"]),
                    _parse_gray(attrs.get("fill", "black")))
    if tag == "symbol":
        return {"id": attrs["id"], "outline": [], "fill": 0}
    if tag == "use":
        ref = attrs.get("href") or attrs.get("xlink:href") or ""
        if not ref.startswith("#"):
            raise ValueError(f"use needs a local #reference, got {ref!r}")
        return Use(ref[1:], (int(round(float(attrs.get("x", "0")))), int(round(float(attrs.get("y", "0"))))))
    raise UnsupportedElement(f"<{tag}> is outside the supported dialect")


def split_at_image_markers(doc: SvgDocument) -> list[SvgDocument]:
    """One cumulative document per image marker, in order."""
    return [SvgDocument(doc.viewbox, doc.items[:idx + 1]) for idx in doc.markers()]


def _shape_element(shape: Shape) -> SvgElement:
    if isinstance(shape, Segment):
        return Line(shape.a, shape.b)
    if isinstance(shape, Circle):
        return CircleEl(shape.center, shape.radius)
    return Polyline(shape.vertices, closed=True)


def element_to_shape(element: SvgElement) -> Shape:
    if isinstance(element, Line):
        return Segment(element.a, element.b)
    if isinstance(element, CircleEl):
        return Circle(element.center, element.radius)
    if isinstance(element, Polyline) and element.closed:
        return Polygon(element.points)
    raise UnsupportedElement(f"{type(element).__name__} does not map to a task shape")


def document_shapes(doc: SvgDocument) -> list[Shape]:
    """Task shapes recovered from a geometry chain document."""
    return [element_to_shape(item) for item in doc.items
            if isinstance(item, (Line, CircleEl, Polyline))]


def problem_viewbox(problem: GeometryProblem) -> tuple[float, float, float, float]:
    """Problem bounding box padded by 10% per side, on a 0.01 grid."""
    x0, y0, x1, y1 = bounding_box(problem.shapes)
    w, h = max(x1 - x0, 0.5), max(y1 - y0, 0.5)
    pad_x, pad_y = 0.1 * w, 0.1 * h
    gx0 = math.floor((x0 - pad_x) * 100) / 100
    gy0 = math.floor((y0 - pad_y) * 100) / 100
    gx1 = math.ceil((x1 + pad_x) * 100) / 100
    gy1 = math.ceil((y1 + pad_y) * 100) / 100
    return (gx0, gy0, round(gx1 - gx0, 2), round(gy1 - gy0, 2))


def emit_geometry_chain(problem: GeometryProblem) -> SvgDocument:
    """Sketch chain for a problem: draw, snapshot, and tally step by step."""
    items: list[SvgItem] = [Comment("Let's think by image")]
    for k, shape in enumerate(problem.shapes):
        items.append(Comment(f"Draw a {shape_phrase(shape)}"))
        items.append(_shape_element(shape))
        items.append(Comment(IMAGE_MARKER))
        if k >= 1:
            items.append(Comment(
                f"which has {problem.per_step_counts[k - 1]} intersection points with the previous shapes."))
    terms = " + ".join(["0"] + [str(c) for c in problem.per_step_counts])
    items.append(Comment(f"Therefore, there are {terms} = {problem.answer} intersection points in total."))
    return SvgDocument(problem_viewbox(problem), tuple(items))


# Piece glyphs as closed polygons in a unit square, y pointing down.
_GLYPHS: dict[str, tuple[tuple[float, float], ...]] = {
    "P": ((0.5, 0.22), (0.6, 0.3), (0.6, 0.42), (0.54, 0.5), (0.62, 0.72), (0.68, 0.78),
          (0.32, 0.78), (0.38, 0.72), (0.46, 0.5), (0.4, 0.42), (0.4, 0.3)),
    "R": ((0.26, 0.78), (0.26, 0.68), (0.32, 0.6), (0.32, 0.4), (0.25, 0.4), (0.25, 0.22),
          (0.35, 0.22), (0.35, 0.3), (0.45, 0.3), (0.45, 0.22), (0.55, 0.22), (0.55, 0.3),
          (0.65, 0.3), (0.65, 0.22), (0.75, 0.22), (0.75, 0.4), (0.68, 0.4), (0.68, 0.6),
          (0.74, 0.68), (0.74, 0.78)),
    "N": ((0.3, 0.78), (0.32, 0.6), (0.28, 0.5), (0.32, 0.34), (0.45, 0.2), (0.52, 0.24),
          (0.52, 0.3), (0.68, 0.42), (0.72, 0.56), (0.64, 0.56), (0.55, 0.47), (0.52, 0.53),
          (0.6, 0.62), (0.62, 0.78)),
    "B": ((0.5, 0.18), (0.58, 0.28), (0.62, 0.42), (0.55, 0.54), (0.64, 0.72), (0.7, 0.78),
          (0.3, 0.78), (0.36, 0.72), (0.45, 0.54), (0.38, 0.42), (0.42, 0.28)),
    "Q": ((0.2, 0.78), (0.24, 0.6), (0.18, 0.3), (0.32, 0.5), (0.36, 0.24), (0.46, 0.48),
          (0.5, 0.2), (0.54, 0.48), (0.64, 0.24), (0.68, 0.5), (0.82, 0.3), (0.76, 0.6),
          (0.8, 0.78)),
    "K": ((0.46, 0.14), (0.54, 0.14), (0.54, 0.2), (0.6, 0.2), (0.6, 0.28), (0.54, 0.28),
          (0.54, 0.34), (0.64, 0.38), (0.7, 0.5), (0.66, 0.62), (0.72, 0.78), (0.28, 0.78),
          (0.34, 0.62), (0.3, 0.5), (0.36, 0.38), (0.46, 0.34), (0.46, 0.28), (0.4, 0.28),
          (0.4, 0.2), (0.46, 0.2)),
}

_PIECE_NAMES = {"K": "king", "Q": "queen", "R": "rook", "B": "bishop", "N": "knight", "P": "pawn"}


def piece_symbol_id(piece: str) -> str:
    color = "white" if piece.isupper() else "black"
    return f"{color}-{_PIECE_NAMES[piece.upper()]}"


def _board_prelude() -> tuple[SvgItem, ...]:
    items: list[SvgItem] = []
    for piece in "KQRBNP":
        for color_piece, fill in ((piece, WHITE_PIECE_GRAY), (piece.lower(), BLACK_PIECE_GRAY)):
            outline = (Polyline(tuple(Point(x, y) for x, y in _GLYPHS[piece]), closed=True),)
            items.append(SymbolDef(piece_symbol_id(color_piece), outline, fill))
    for row in range(8):
        for file in range(8):
            fill = LIGHT_SQUARE_GRAY if (file + row) % 2 == 0 else DARK_SQUARE_GRAY
            items.append(Rect(Point(file, row), 1, 1, fill))
    return tuple(items)


_BOARD_PRELUDE = _board_prelude()


def emit_chess_board(state: chess_engine.BoardState) -> SvgDocument:
    """Board document: fixed prelude, one use per occupied square, one marker."""
    items = list(_BOARD_PRELUDE)
    for idx, piece in enumerate(state.placement):
        if piece is not None:
            items.append(Use(piece_symbol_id(piece), (idx % 8, idx // 8)))
    items.append(Comment(IMAGE_MARKER))
    return SvgDocument((0.0, 0.0, 8.0, 8.0), tuple(items))


def board_prelude_text() -> str:
    """Serialized fixed prelude, identical across all board documents."""
    return "\n".join(_serialize_item(item, _num(_stroke_width((0, 0, 8, 8)))) for item in _BOARD_PRELUDE)
