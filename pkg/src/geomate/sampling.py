"""Boundary-walk intersection counter, independent of the analytic route.

Walks each shape's boundary and counts sign changes of a side function of
every other shape. The side functions are 1-Lipschitz in arc length, so an
interval whose endpoint values exceed its length certifiably contains no
crossing; everything else is bisected down to a fine floor step. Under the
generator's general-position margin every crossing is transversal and
isolated, which makes the count exact.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .geometry import (
    GENERAL_POSITION_MARGIN,
    Circle,
    GeometryProblem,
    Polygon,
    Segment,
    Shape,
)

_COARSE_STEP = 0.05
_FINE_STEP = GENERAL_POSITION_MARGIN / 10.0


class _Walker:
    """Arc-length parameterization of a shape boundary."""

    def __init__(self, shape: Shape):
        self.closed = not isinstance(shape, Segment)
        if isinstance(shape, Segment):
            self.length = shape.length
            self._ax, self._ay = shape.a.x, shape.a.y
            self._dx = (shape.b.x - shape.a.x) / self.length
            self._dy = (shape.b.y - shape.a.y) / self.length
            self._kind = "segment"
        elif isinstance(shape, Circle):
            self.length = 2.0 * math.pi * shape.radius
            self._cx, self._cy, self._r = shape.center.x, shape.center.y, shape.radius
            self._kind = "circle"
        else:
            verts = shape.vertices
            self._ex0 = np.array([p.x for p in verts])
            self._ey0 = np.array([p.y for p in verts])
            nxt = list(range(1, len(verts))) + [0]
            self._ex1 = self._ex0[nxt]
            self._ey1 = self._ey0[nxt]
            seg_len = np.sqrt((self._ex1 - self._ex0) ** 2 + (self._ey1 - self._ey0) ** 2)
            self._cum = np.concatenate(([0.0], np.cumsum(seg_len)))
            self._seg_len = seg_len
            self._cum_list = self._cum.tolist()
            self.length = float(self._cum[-1])
            self._kind = "polygon"

    def points(self, ts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if self._kind == "segment":
            return self._ax + ts * self._dx, self._ay + ts * self._dy
        if self._kind == "circle":
            ang = ts / self._r
            return self._cx + self._r * np.cos(ang), self._cy + self._r * np.sin(ang)
        ts = np.mod(ts, self.length)
        idx = np.clip(np.searchsorted(self._cum, ts, side="right") - 1, 0, len(self._seg_len) - 1)
        local = (ts - self._cum[idx]) / self._seg_len[idx]
        x = self._ex0[idx] + local * (self._ex1[idx] - self._ex0[idx])
        y = self._ey0[idx] + local * (self._ey1[idx] - self._ey0[idx])
        return x, y

    def point(self, t: float) -> tuple[float, float]:
        if self._kind == "segment":
            return self._ax + t * self._dx, self._ay + t * self._dy
        if self._kind == "circle":
            ang = t / self._r
            return self._cx + self._r * math.cos(ang), self._cy + self._r * math.sin(ang)
        t = t % self.length
        cum = self._cum_list
        lo, hi = 0, len(cum) - 1
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if cum[mid] <= t:
                lo = mid
            else:
                hi = mid
        local = (t - cum[lo]) / self._seg_len[lo]
        return (self._ex0[lo] + local * (self._ex1[lo] - self._ex0[lo]),
                self._ey0[lo] + local * (self._ey1[lo] - self._ey0[lo]))


class _Watcher:
    """Signed side value of a watched shape, vectorized and scalar."""

    def __init__(self, shape: Shape):
        self._kind = "circle" if isinstance(shape, Circle) else "segment" if isinstance(shape, Segment) else "polygon"
        if isinstance(shape, Circle):
            self._cx, self._cy, self._r = shape.center.x, shape.center.y, shape.radius
        elif isinstance(shape, Segment):
            self._ax, self._ay = shape.a.x, shape.a.y
            self._len = shape.length
            self._ux = (shape.b.x - shape.a.x) / self._len
            self._uy = (shape.b.y - shape.a.y) / self._len
        else:
            verts = shape.vertices
            self._px0 = [p.x for p in verts]
            self._py0 = [p.y for p in verts]
            nxt = list(range(1, len(verts))) + [0]
            self._px1 = [self._px0[i] for i in nxt]
            self._py1 = [self._py0[i] for i in nxt]
            self._vx0 = np.array(self._px0)
            self._vy0 = np.array(self._py0)
            self._vx1 = np.array(self._px1)
            self._vy1 = np.array(self._py1)
            self._vdx = self._vx1 - self._vx0
            self._vdy = self._vy1 - self._vy0
            self._vdd = self._vdx ** 2 + self._vdy ** 2

    def side_many(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if self._kind == "circle":
            return np.sqrt((x - self._cx) ** 2 + (y - self._cy) ** 2) - self._r
        if self._kind == "segment":
            # Signed distance to the closed segment: magnitude prunes far
            # passes quickly, the line side provides the sign.
            px, py = x - self._ax, y - self._ay
            u = np.clip(px * self._ux + py * self._uy, 0.0, self._len)
            dist = np.sqrt((px - u * self._ux) ** 2 + (py - u * self._uy) ** 2)
            return np.where(px * self._uy - py * self._ux < 0, -dist, dist)
        px = x[:, None] - self._vx0[None, :]
        py = y[:, None] - self._vy0[None, :]
        t = np.clip((px * self._vdx + py * self._vdy) / self._vdd, 0.0, 1.0)
        dist = np.sqrt((px - t * self._vdx) ** 2 + (py - t * self._vdy) ** 2).min(axis=1)
        # Even-odd ray cast (half-open edge rule) for the inside sign.
        cond = (self._vy0[None, :] <= y[:, None]) != (self._vy1[None, :] <= y[:, None])
        with np.errstate(divide="ignore", invalid="ignore"):
            x_at = self._vx0[None, :] + (y[:, None] - self._vy0[None, :]) * self._vdx / np.where(
                self._vdy == 0, 1.0, self._vdy)
        inside = (np.logical_and(cond, x_at <= x[:, None]).sum(axis=1) % 2).astype(bool)
        return np.where(inside, -dist, dist)

    def side(self, x: float, y: float) -> float:
        if self._kind == "circle":
            return math.sqrt((x - self._cx) ** 2 + (y - self._cy) ** 2) - self._r
        if self._kind == "segment":
            px, py = x - self._ax, y - self._ay
            u = px * self._ux + py * self._uy
            u = 0.0 if u < 0.0 else self._len if u > self._len else u
            ex, ey = px - u * self._ux, py - u * self._uy
            dist = math.sqrt(ex * ex + ey * ey)
            return -dist if px * self._uy - py * self._ux < 0 else dist
        best = math.inf
        inside = False
        for x0, y0, x1, y1 in zip(self._px0, self._py0, self._px1, self._py1):
            dx, dy = x1 - x0, y1 - y0
            px, py = x - x0, y - y0
            t = (px * dx + py * dy) / (dx * dx + dy * dy)
            t = 0.0 if t < 0.0 else 1.0 if t > 1.0 else t
            ex, ey = px - t * dx, py - t * dy
            d = math.sqrt(ex * ex + ey * ey)
            if d < best:
                best = d
            if (y0 <= y) != (y1 <= y) and x0 + (y - y0) * dx / dy <= x:
                inside = not inside
        return -best if inside else best

    def gate(self, x: float, y: float) -> bool:
        """True unless a detected line crossing lies beyond a segment's extent."""
        if self._kind != "segment":
            return True
        u = (x - self._ax) * self._ux + (y - self._ay) * self._uy
        return -GENERAL_POSITION_MARGIN / 2 <= u <= self._len + GENERAL_POSITION_MARGIN / 2


def pair_crossings(walker_shape: Shape, watched_shape: Shape,
                   coarse_step: float = _COARSE_STEP, fine_step: float = _FINE_STEP) -> int:
    """Number of times walker_shape's boundary crosses watched_shape's boundary."""
    walker = _Walker(walker_shape)
    watch = _Watcher(watched_shape)

    n = max(8, int(math.ceil(walker.length / coarse_step)))
    if walker.closed:
        ts = np.arange(n) * (walker.length / n)
    else:
        ts = np.linspace(0.0, walker.length, n + 1)
    xs, ys = walker.points(ts)
    gs = watch.side_many(xs, ys)

    def side_at(t: float) -> float:
        x, y = walker.point(t)
        return watch.side(x, y)

    # A sample landing exactly on the watched boundary would hide the sign
    # change on grid-aligned data; crossings are transversal and isolated, so
    # nudging the sample along the walk recovers an unambiguous sign.
    nudge = min(fine_step, walker.length / n * 1e-3)
    for i in np.nonzero(gs == 0.0)[0]:
        t, step = float(ts[i]), nudge if i + 1 < len(ts) else -nudge
        for _ in range(8):
            t += step
            g = side_at(t)
            if g != 0.0:
                break
        ts[i], gs[i] = t, g

    def refine(t0: float, t1: float, g0: float, g1: float) -> int:
        gap = t1 - t0
        if (g0 if g0 > 0 else -g0) > gap and (g1 if g1 > 0 else -g1) > gap:
            return 0
        if gap <= fine_step:
            if g0 * g1 < 0:
                x, y = walker.point(0.5 * (t0 + t1))
                return 1 if watch.gate(x, y) else 0
            return 0
        tm = 0.5 * (t0 + t1)
        gm = side_at(tm)
        if gm == 0.0:
            tm += min(fine_step, 0.25 * gap)
            gm = side_at(tm)
        return refine(t0, tm, g0, gm) + refine(tm, t1, gm, g1)

    total = 0
    m = len(ts)
    flip = np.nonzero((gs[:-1] * gs[1:] < 0)
                      | (np.minimum(np.abs(gs[:-1]), np.abs(gs[1:])) <= (ts[1:] - ts[:-1])))[0]
    for i in flip:
        total += refine(float(ts[i]), float(ts[i + 1]), float(gs[i]), float(gs[i + 1]))
    if walker.closed:
        # Wrap interval; ts[0] may have been nudged past the seam, so the
        # right endpoint carries its true cyclic parameter.
        t0, t1 = float(ts[m - 1]), walker.length + float(ts[0])
        g0, g1 = float(gs[m - 1]), float(gs[0])
        if g0 * g1 < 0 or min(abs(g0), abs(g1)) <= (t1 - t0):
            total += refine(t0, t1, g0, g1)
    return total


def count_by_boundary_walk(problem: GeometryProblem | Sequence[Shape],
                           coarse_step: float = _COARSE_STEP,
                           fine_step: float = _FINE_STEP) -> int:
    """Total crossings over all shape pairs; cross-checks the analytic count."""
    shapes = problem.shapes if isinstance(problem, GeometryProblem) else tuple(problem)
    total = 0
    for i in range(len(shapes)):
        for j in range(i + 1, len(shapes)):
            total += pair_crossings(shapes[i], shapes[j], coarse_step, fine_step)
    return total
