"""Exact 2-D primitives: smallest enclosing circle, crop construction, and
coordinate transforms between full-image and crop space.

Coordinates are (x, y) with the origin at the image top-left and y growing
downward. Integer coordinates address pixel centers.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegenerateCrop, EmptyPointSet, OracleSizeExceeded

# Containment slack for the incremental construction: a point this close to
# the boundary (relatively) is treated as inside, so support points do not
# oscillate under float noise.
_REL_EPS = 1e-12


@dataclass(frozen=True)
class Circle:
    cx: float
    cy: float
    radius: float

    @property
    def center(self) -> tuple[float, float]:
        return (self.cx, self.cy)

    def contains(self, x: float, y: float, slack: float = 1e-7) -> bool:
        return math.hypot(x - self.cx, y - self.cy) <= self.radius + slack


@dataclass(frozen=True)
class CropRect:
    """Integer crop: x0/y0 inclusive top-left, side_w/side_h extents, plus the
    dimensions of the image it was cut from."""

    x0: int
    y0: int
    side_w: int
    side_h: int
    image_w: int
    image_h: int

    def __post_init__(self):
        if self.side_w < 1 or self.side_h < 1:
            raise DegenerateCrop(f"empty crop: {self.side_w}x{self.side_h}")
        if (self.x0 < 0 or self.y0 < 0
                or self.x0 + self.side_w > self.image_w
                or self.y0 + self.side_h > self.image_h):
            raise DegenerateCrop(
                f"crop ({self.x0},{self.y0},{self.side_w},{self.side_h}) "
                f"exceeds image {self.image_w}x{self.image_h}")


@dataclass(frozen=True)
class CropParams:
    expansion_ratio: float = 1.4
    min_diameter: float = 16.0
    target_size: int = 256

    def __post_init__(self):
        if self.expansion_ratio < 1:
            raise ValueError(f"expansion_ratio must be >= 1, got {self.expansion_ratio}")
        if self.min_diameter <= 0:
            raise ValueError(f"min_diameter must be > 0, got {self.min_diameter}")
        if self.target_size < 32:
            raise ValueError(f"target_size must be >= 32, got {self.target_size}")


def _circle_two(ax, ay, bx, by) -> Circle:
    cx = (ax + bx) / 2.0
    cy = (ay + by) / 2.0
    r = max(math.hypot(cx - ax, cy - ay), math.hypot(cx - bx, cy - by))
    return Circle(cx, cy, r)


def _circle_three(ax, ay, bx, by, cx, cy) -> Circle | None:
    """Circumscribed circle, or None for collinear points.

    Coordinates are re-centred on the bounding-box midpoint before solving;
    this keeps the determinant well conditioned for far-from-origin inputs.
    """
    ox = (min(ax, bx, cx) + max(ax, bx, cx)) / 2.0
    oy = (min(ay, by, cy) + max(ay, by, cy)) / 2.0
    ax -= ox
    ay -= oy
    bx -= ox
    by -= oy
    cx -= ox
    cy -= oy
    d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2.0
    if d == 0.0:
        return None
    ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
          + (cx * cx + cy * cy) * (ay - by)) / d
    uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
          + (cx * cx + cy * cy) * (bx - ax)) / d
    r = max(math.hypot(ux - ax, uy - ay),
            math.hypot(ux - bx, uy - by),
            math.hypot(ux - cx, uy - cy))
    return Circle(ux + ox, uy + oy, r)


def _inside(c: Circle | None, p) -> bool:
    if c is None:
        return False
    return math.hypot(p[0] - c.cx, p[1] - c.cy) <= c.radius * (1.0 + _REL_EPS) + 1e-14


def _as_point_list(points):
    pts = [(float(p[0]), float(p[1])) for p in points]
    for x, y in pts:
        if not (math.isfinite(x) and math.isfinite(y)):
            raise EmptyPointSet(f"non-finite point ({x}, {y})")
    return pts


def smallest_enclosing_circle(points, seed: int = 0) -> Circle:
    """Minimal circle containing every input point (Welzl, randomized order).

    The shuffle is driven by ``seed`` so the whole computation is
    reproducible. Collinear support triples fall back to the best pair
    circle via the degenerate-circumcircle check.
    """
    pts = _as_point_list(points)
    if not pts:
        raise EmptyPointSet("smallest_enclosing_circle needs at least one point")
    shuffled = list(pts)
    random.Random(seed).shuffle(shuffled)

    # Incremental form of Welzl's algorithm: grow the circle, re-solving with
    # each violating point pinned to the boundary.
    c: Circle | None = None
    for i, p in enumerate(shuffled):
        if not _inside(c, p):
            c = _sec_one_boundary(shuffled[:i + 1], p)
    assert c is not None
    return c


def _sec_one_boundary(pts, p) -> Circle:
    c = Circle(p[0], p[1], 0.0)
    for i, q in enumerate(pts):
        if not _inside(c, q):
            if c.radius == 0.0:
                c = _circle_two(p[0], p[1], q[0], q[1])
            else:
                c = _sec_two_boundary(pts[:i + 1], p, q)
    return c


def _sec_two_boundary(pts, p, q) -> Circle:
    circ = _circle_two(p[0], p[1], q[0], q[1])
    left: Circle | None = None
    right: Circle | None = None
    for r in pts:
        if _inside(circ, r):
            continue
        cross = _cross(p, q, r)
        c = _circle_three(p[0], p[1], q[0], q[1], r[0], r[1])
        if c is None:
            continue
        side = _cross(p, q, (c.cx, c.cy))
        if cross > 0.0 and (left is None or side > _cross(p, q, (left.cx, left.cy))):
            left = c
        elif cross < 0.0 and (right is None or side < _cross(p, q, (right.cx, right.cy))):
            right = c
    if left is None:
        return circ if right is None else right
    if right is None:
        return left
    return left if left.radius <= right.radius else right


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@lru_cache(maxsize=None)
def _triple_indices(n: int):
    idx = np.asarray([(i, j, k) for i in range(n) for j in range(i + 1, n)
                      for k in range(j + 1, n)])
    return idx[:, 0], idx[:, 1], idx[:, 2]


def brute_force_sec(points) -> Circle:
    """Exhaustive smallest-circle reference: try every pair-diameter and
    triple-circumscribed circle, keep the smallest one that encloses all
    points. Exact up to float arithmetic; intended as a test oracle.

    Candidate construction and containment run vectorized so the oracle
    stays usable for tens of thousands of small sets.
    """
    pts = _as_point_list(points)
    if not pts:
        raise EmptyPointSet("brute_force_sec needs at least one point")
    if len(pts) > 16:
        raise OracleSizeExceeded(f"brute_force_sec capped at 16 points, got {len(pts)}")
    if len(pts) == 1:
        return Circle(pts[0][0], pts[0][1], 0.0)

    p = np.asarray(pts, dtype=float)
    n = len(p)
    iu, ju = np.triu_indices(n, k=1)
    pair_c = (p[iu] + p[ju]) / 2.0
    pair_r = np.maximum(np.hypot(*(pair_c - p[iu]).T), np.hypot(*(pair_c - p[ju]).T))

    centers = [pair_c]
    radii = [pair_r]
    if n >= 3:
        ti, tj, tk = _triple_indices(n)
        a, b, c = p[ti], p[tj], p[tk]
        # Re-centre each triple on its bbox midpoint (conditioning).
        mid = (np.minimum(np.minimum(a, b), c) + np.maximum(np.maximum(a, b), c)) / 2.0
        a = a - mid
        b = b - mid
        c = c - mid
        d = 2.0 * (a[:, 0] * (b[:, 1] - c[:, 1]) + b[:, 0] * (c[:, 1] - a[:, 1])
                   + c[:, 0] * (a[:, 1] - b[:, 1]))
        ok = d != 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            a2 = (a ** 2).sum(axis=1)
            b2 = (b ** 2).sum(axis=1)
            c2 = (c ** 2).sum(axis=1)
            ux = (a2 * (b[:, 1] - c[:, 1]) + b2 * (c[:, 1] - a[:, 1])
                  + c2 * (a[:, 1] - b[:, 1])) / d
            uy = (a2 * (c[:, 0] - b[:, 0]) + b2 * (a[:, 0] - c[:, 0])
                  + c2 * (b[:, 0] - a[:, 0])) / d
        u = np.stack([ux, uy], axis=1)
        tri_r = np.maximum(np.maximum(np.hypot(*(u - a).T), np.hypot(*(u - b).T)),
                           np.hypot(*(u - c).T))
        centers.append((u + mid)[ok])
        radii.append(tri_r[ok])

    cen = np.concatenate(centers)
    rad = np.concatenate(radii)
    dist = np.hypot(cen[:, 0:1] - p[None, :, 0], cen[:, 1:2] - p[None, :, 1])
    valid = (dist <= rad[:, None] * (1.0 + _REL_EPS) + 1e-14).all(axis=1)
    best = np.flatnonzero(valid)[np.argmin(rad[valid])]
    return Circle(float(cen[best, 0]), float(cen[best, 1]), float(rad[best]))


def expand_to_crop(circle: Circle, params: CropParams, image_dims) -> CropRect:
    """Square crop around ``circle``: side = round(ratio * max(diameter,
    min_diameter)), centred on the circle, then cut to image bounds (cutting
    may make it non-square)."""
    image_w, image_h = int(image_dims[0]), int(image_dims[1])
    if image_w < 1 or image_h < 1:
        raise DegenerateCrop(f"bad image dims {image_dims}")
    if not (math.isfinite(circle.cx) and math.isfinite(circle.cy)
            and math.isfinite(circle.radius)):
        raise DegenerateCrop("non-finite circle")

    side = int(round(params.expansion_ratio
                     * max(2.0 * circle.radius, params.min_diameter)))
    side = max(side, 1)
    x0 = int(round(circle.cx - side / 2.0))
    y0 = int(round(circle.cy - side / 2.0))

    cx0 = max(x0, 0)
    cy0 = max(y0, 0)
    cx1 = min(x0 + side, image_w)
    cy1 = min(y0 + side, image_h)
    if cx1 <= cx0 or cy1 <= cy0:
        raise DegenerateCrop(
            f"circle at ({circle.cx}, {circle.cy}) r={circle.radius} "
            f"falls outside image {image_w}x{image_h}")
    return CropRect(cx0, cy0, cx1 - cx0, cy1 - cy0, image_w, image_h)


def map_point(p, crop: CropRect, target_size: int, direction: str):
    """Affine map between full-image coordinates and ``target_size`` crop
    space. Corner-anchored: the crop's top-left corner maps to 0 and its far
    edge to ``target_size`` on each axis."""
    sx = target_size / crop.side_w
    sy = target_size / crop.side_h
    x, y = float(p[0]), float(p[1])
    if direction == "to_crop":
        return ((x - crop.x0) * sx, (y - crop.y0) * sy)
    if direction == "to_image":
        return (x / sx + crop.x0, y / sy + crop.y0)
    raise ValueError(f"direction must be 'to_crop' or 'to_image', got {direction!r}")
