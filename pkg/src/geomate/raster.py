"""Deterministic rasterizer for the sketch dialect, plus pixel comparison.

Rendering is pure float64 numpy with a single final rounding, so identical
documents produce byte-identical pixel buffers. Strokes are drawn from exact
distance fields on a 2x2 subsample grid (4x supersampling); fills use
even-odd scanline parity on the same grid. The viewbox is fitted with a
uniform scale and centered, matching default SVG preserveAspectRatio.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass

import numpy as np

from .svg_chain import (
    CircleEl,
    Comment,
    Line,
    Polyline,
    Rect,
    SvgDocument,
    SymbolDef,
    UnsupportedElement,
    Use,
)

BACKGROUND_GRAY = 255
STROKE_WIDTH_REF = 2.0  # pixels at a 512x512 canvas
REFERENCE_SIZE = 512


class DimensionMismatch(Exception):
    """Images being compared have different sizes."""


@dataclass(frozen=True)
class RasterImage:
    width: int
    height: int
    pixels: np.ndarray  # uint8, shape (height, width), row 0 at the top

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("raster dimensions must be positive")
        if self.pixels.shape != (self.height, self.width) or self.pixels.dtype != np.uint8:
            raise ValueError("pixel buffer must be uint8 with shape (height, width)")

    def __eq__(self, other):
        if not isinstance(other, RasterImage):
            return NotImplemented
        return (self.width, self.height) == (other.width, other.height) and \
            bool(np.array_equal(self.pixels, other.pixels))

    def tobytes(self) -> bytes:
        return self.pixels.tobytes()


def _subsample_axis(lo: int, hi: int) -> np.ndarray:
    # Two samples per pixel at 0.25 and 0.75.
    return lo + 0.25 + 0.5 * np.arange(2 * (hi - lo))


def _composite(canvas: np.ndarray, y0: int, y1: int, x0: int, x1: int,
               sub_mask: np.ndarray, gray: int) -> None:
    cov = sub_mask.reshape(y1 - y0, 2, x1 - x0, 2).mean(axis=(1, 3))
    region = canvas[y0:y1, x0:x1]
    region *= 1.0 - cov
    region += gray * cov


def _clip_box(xmin, ymin, xmax, ymax, width, height):
    x0 = max(0, int(np.floor(xmin)))
    y0 = max(0, int(np.floor(ymin)))
    x1 = min(width, int(np.ceil(xmax)) + 1)
    y1 = min(height, int(np.ceil(ymax)) + 1)
    return (x0, y0, x1, y1) if x0 < x1 and y0 < y1 else None


def _stroke_segments(canvas, segments, gray, radius, width, height):
    for (ax, ay, bx, by) in segments:
        box = _clip_box(min(ax, bx) - radius, min(ay, by) - radius,
                        max(ax, bx) + radius, max(ay, by) + radius, width, height)
        if box is None:
            continue
        x0, y0, x1, y1 = box
        xs = _subsample_axis(x0, x1)[None, :]
        ys = _subsample_axis(y0, y1)[:, None]
        dx, dy = bx - ax, by - ay
        dd = dx * dx + dy * dy
        if dd == 0:
            dist = np.sqrt((xs - ax) ** 2 + (ys - ay) ** 2)
        else:
            t = np.clip(((xs - ax) * dx + (ys - ay) * dy) / dd, 0.0, 1.0)
            dist = np.sqrt((xs - (ax + t * dx)) ** 2 + (ys - (ay + t * dy)) ** 2)
        _composite(canvas, y0, y1, x0, x1, dist <= radius, gray)


def _stroke_circle(canvas, cx, cy, r, gray, radius, width, height):
    box = _clip_box(cx - r - radius, cy - r - radius, cx + r + radius, cy + r + radius, width, height)
    if box is None:
        return
    x0, y0, x1, y1 = box
    xs = _subsample_axis(x0, x1)[None, :]
    ys = _subsample_axis(y0, y1)[:, None]
    dist = np.abs(np.sqrt((xs - cx) ** 2 + (ys - cy) ** 2) - r)
    _composite(canvas, y0, y1, x0, x1, dist <= radius, gray)


def _fill_polygon(canvas, xs_pts, ys_pts, gray, width, height):
    box = _clip_box(min(xs_pts), min(ys_pts), max(xs_pts), max(ys_pts), width, height)
    if box is None:
        return
    x0, y0, x1, y1 = box
    xs = _subsample_axis(x0, x1)[None, :]
    ys = _subsample_axis(y0, y1)[:, None]
    inside = np.zeros((ys.shape[0], xs.shape[1]), dtype=bool)
    n = len(xs_pts)
    for i in range(n):
        ax, ay = xs_pts[i], ys_pts[i]
        bx, by = xs_pts[(i + 1) % n], ys_pts[(i + 1) % n]
        if ay == by:
            continue
        rows = (ay <= ys) != (by <= ys)
        x_at = ax + (ys - ay) * (bx - ax) / (by - ay)
        inside ^= rows & (x_at <= xs)
    _composite(canvas, y0, y1, x0, x1, inside, gray)


def rasterize(doc: SvgDocument, width: int = REFERENCE_SIZE, height: int = REFERENCE_SIZE) -> RasterImage:
    """Render a document to grayscale pixels; identical inputs give identical bytes."""
    vx, vy, vw, vh = doc.viewbox
    if vw <= 0 or vh <= 0:
        raise ValueError(f"viewbox must have positive area, got {doc.viewbox}")
    if width <= 0 or height <= 0:
        raise ValueError("raster dimensions must be positive")
    scale = min(width / vw, height / vh)
    ox = (width - scale * vw) / 2.0 - scale * vx
    oy = (height - scale * vh) / 2.0 - scale * vy

    def px(x: float) -> float:
        return x * scale + ox

    def py(y: float) -> float:
        return y * scale + oy

    stroke_radius = STROKE_WIDTH_REF * min(width, height) / REFERENCE_SIZE / 2.0
    canvas = np.full((height, width), float(BACKGROUND_GRAY))
    symbols: dict[str, SymbolDef] = {}
    for item in doc.items:
        if isinstance(item, Comment):
            continue
        if isinstance(item, SymbolDef):
            symbols[item.symbol_id] = item
            continue
        if isinstance(item, Line):
            _stroke_segments(canvas, [(px(item.a.x), py(item.a.y), px(item.b.x), py(item.b.y))],
                             item.gray, stroke_radius, width, height)
        elif isinstance(item, CircleEl):
            _stroke_circle(canvas, px(item.center.x), py(item.center.y), item.radius * scale,
                           item.gray, stroke_radius, width, height)
        elif isinstance(item, Polyline):
            pts = item.points
            pairs = list(zip(pts, pts[1:] + (pts[:1] if item.closed else ())))
            _stroke_segments(canvas, [(px(a.x), py(a.y), px(b.x), py(b.y)) for a, b in pairs],
                             item.gray, stroke_radius, width, height)
        elif isinstance(item, Rect):
            xs = [px(item.origin.x), px(item.origin.x + item.width),
                  px(item.origin.x + item.width), px(item.origin.x)]
            ys = [py(item.origin.y), py(item.origin.y),
                  py(item.origin.y + item.height), py(item.origin.y + item.height)]
            _fill_polygon(canvas, xs, ys, item.fill, width, height)
        elif isinstance(item, Use):
            symbol = symbols.get(item.symbol_id)
            if symbol is None:
                raise UnsupportedElement(f"use of undeclared symbol {item.symbol_id!r}")
            for poly in symbol.outline:
                xs = [px(p.x + item.at[0]) for p in poly.points]
                ys = [py(p.y + item.at[1]) for p in poly.points]
                _fill_polygon(canvas, xs, ys, symbol.fill, width, height)
        else:
            raise UnsupportedElement(f"cannot rasterize {type(item).__name__}")
    pixels = np.clip(np.rint(canvas), 0, 255).astype(np.uint8)
    return RasterImage(width, height, pixels)


def image_similarity(a: RasterImage, b: RasterImage) -> float:
    """Percentage of exactly-equal pixels."""
    if (a.width, a.height) != (b.width, b.height):
        raise DimensionMismatch(f"{a.width}x{a.height} vs {b.width}x{b.height}")
    equal = int(np.count_nonzero(a.pixels == b.pixels))
    return 100.0 * equal / (a.width * a.height)


def downsample_majority(img: RasterImage, factor: int = 2) -> RasterImage:
    """Shrink by integer factor; each output pixel is the block's majority value.

    Ties pick the smallest value among the most frequent.
    """
    if img.width % factor or img.height % factor:
        raise ValueError("image dimensions must be divisible by the factor")
    h, w = img.height // factor, img.width // factor
    blocks = img.pixels.reshape(h, factor, w, factor).transpose(0, 2, 1, 3).reshape(h, w, factor * factor)
    blocks = np.sort(blocks, axis=2)
    best_val = blocks[:, :, 0].copy()
    best_count = np.ones((h, w), dtype=np.int16)
    run_val = blocks[:, :, 0].copy()
    run_count = np.ones((h, w), dtype=np.int16)
    for k in range(1, factor * factor):
        cur = blocks[:, :, k]
        cont = cur == run_val
        run_count = np.where(cont, run_count + 1, 1)
        run_val = cur
        better = run_count > best_count
        best_count = np.where(better, run_count, best_count)
        best_val = np.where(better, run_val, best_val)
    return RasterImage(w, h, best_val.astype(np.uint8))


def write_pgm(img: RasterImage, path) -> None:
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (img.width, img.height))
        fh.write(img.tobytes())


def read_pgm(path) -> RasterImage:
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(b"P5"):
        raise ValueError("not a binary PGM file")
    fields: list[bytes] = []
    pos = 2
    while len(fields) < 3:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            pos = data.index(b"\n", pos) + 1
            continue
        end = pos
        while end < len(data) and not data[end:end + 1].isspace():
            end += 1
        fields.append(data[pos:end])
        pos = end
    pos += 1
    width, height, maxval = (int(f) for f in fields)
    if maxval != 255:
        raise ValueError(f"unsupported maxval {maxval}")
    pixels = np.frombuffer(data[pos:pos + width * height], dtype=np.uint8).reshape(height, width)
    return RasterImage(width, height, pixels.copy())


def _png_chunk(tag: bytes, payload: bytes) -> bytes:
    crc = zlib.crc32(tag + payload) & 0xFFFFFFFF
    return struct.pack(">I", len(payload)) + tag + payload + struct.pack(">I", crc)


def write_png(img: RasterImage, path) -> None:
    """Minimal 8-bit grayscale PNG; fixed filter and compression for stable bytes."""
    header = struct.pack(">IIBBBBB", img.width, img.height, 8, 0, 0, 0, 0)
    raw = b"".join(b"\x00" + img.pixels[row].tobytes() for row in range(img.height))
    payload = zlib.compress(raw, 6)
    with open(path, "wb") as fh:
        fh.write(b"\x89PNG\r\n\x1a\n")
        fh.write(_png_chunk(b"IHDR", header))
        fh.write(_png_chunk(b"IDAT", payload))
        fh.write(_png_chunk(b"IEND", b""))
