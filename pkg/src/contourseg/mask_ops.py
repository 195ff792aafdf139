"""Binary-raster algorithms over boolean masks.

Masks are numpy bool arrays of shape (height, width), indexed [y, x].
Connectivity convention: 8-connectivity for foreground everywhere (contours,
components, polylines); the background complement is treated 4-connected,
which keeps hole topology consistent. A boundary pixel is a foreground pixel
with a 4-neighbor background pixel or lying on the image border.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from PIL import Image
from scipy import ndimage

from .errors import EmptyMask, EmptySeedSet, ShapeMismatch, TooFewPoints
from .geometry import CropRect

_FULL_STRUCT = np.ones((3, 3), dtype=bool)  # 8-connectivity


def as_mask(arr) -> np.ndarray:
    m = np.asarray(arr)
    if m.ndim != 2:
        raise ShapeMismatch(f"mask must be 2-D, got shape {m.shape}")
    return m.astype(bool, copy=False)


@dataclass
class Contour:
    pixels: np.ndarray          # (N, 2) int32 (x, y), row-major sorted
    kind: str                   # "exterior" | "interior"
    parent: int | None          # index of the enclosing exterior contour


@dataclass
class ContourSet:
    contours: list[Contour]
    width: int
    height: int

    def all_pixels(self) -> np.ndarray:
        if not self.contours:
            return np.zeros((0, 2), dtype=np.int32)
        return np.concatenate([c.pixels for c in self.contours], axis=0)

    def __len__(self) -> int:
        return len(self.contours)

    def __iter__(self):
        return iter(self.contours)


def extract_contours(mask) -> ContourSet:
    """Boundary pixels of every object, split into exterior contours and
    hole (interior) contours with parent links.

    A pixel adjacent both to the outside and to a hole counts as exterior;
    every boundary pixel lands in exactly one contour.
    """
    m = as_mask(mask)
    h, w = m.shape
    if not m.any():
        raise EmptyMask("mask has no foreground pixel")

    fg_labels, n_fg = ndimage.label(m, structure=_FULL_STRUCT)
    bg_labels, n_bg = ndimage.label(~m)  # 4-connected background

    border_vals = np.concatenate(
        [bg_labels[0, :], bg_labels[-1, :], bg_labels[:, 0], bg_labels[:, -1]])
    outside = np.zeros(n_bg + 1, dtype=bool)
    outside[np.unique(border_vals[border_vals > 0])] = True

    # Enclosing component of each hole: the pixel straight above a hole's
    # topmost-leftmost pixel is always foreground and always belongs to the
    # surrounding component.
    hole_parent = np.zeros(n_bg + 1, dtype=np.int32)
    for b in range(1, n_bg + 1):
        if outside[b]:
            continue
        ys, xs = np.nonzero(bg_labels == b)
        hole_parent[b] = fg_labels[ys[0] - 1, xs[0]]

    pad = np.pad(m, 1, constant_values=False)
    has_bg4 = (~pad[:-2, 1:-1] | ~pad[2:, 1:-1]
               | ~pad[1:-1, :-2] | ~pad[1:-1, 2:])
    boundary = m & has_bg4

    ys, xs = np.nonzero(boundary)  # row-major order
    comp = fg_labels[ys, xs]

    # 4-neighbor background labels per boundary pixel; -1 marks off-image,
    # 0 is a foreground neighbor.
    bgl = np.pad(bg_labels, 1, constant_values=-1)
    neigh = np.stack([bgl[ys, xs + 1], bgl[ys + 2, xs + 1],
                      bgl[ys + 1, xs], bgl[ys + 1, xs + 2]])

    safe = np.maximum(neigh, 0)
    is_outside_like = (neigh == -1) | ((neigh > 0) & (outside[safe]
                                                      | (hole_parent[safe] != comp)))
    exterior_px = is_outside_like.any(axis=0)

    hole_cand = np.where((neigh > 0) & (hole_parent[safe] == comp), neigh,
                         np.iinfo(np.int32).max)
    hole_of = hole_cand.min(axis=0)

    contours: list[Contour] = []
    for c in range(1, n_fg + 1):
        sel = comp == c
        ext_sel = sel & exterior_px
        ext_index = len(contours)
        contours.append(Contour(
            pixels=np.stack([xs[ext_sel], ys[ext_sel]], axis=1).astype(np.int32),
            kind="exterior", parent=None))
        int_sel = sel & ~exterior_px
        for b in np.unique(hole_of[int_sel]):
            bsel = int_sel & (hole_of == b)
            contours.append(Contour(
                pixels=np.stack([xs[bsel], ys[bsel]], axis=1).astype(np.int32),
                kind="interior", parent=ext_index))
    return ContourSet(contours=contours, width=w, height=h)


def distance_transform(seeds, dims) -> np.ndarray:
    """Exact Euclidean distance from every pixel to the nearest seed pixel.

    ``seeds`` is an iterable/array of integer (x, y); ``dims`` is (width,
    height). Returns a float64 grid of shape (height, width).
    """
    w, h = int(dims[0]), int(dims[1])
    pts = np.asarray(list(seeds) if not isinstance(seeds, np.ndarray) else seeds)
    if pts.size == 0:
        raise EmptySeedSet("distance_transform needs at least one seed")
    pts = pts.reshape(-1, 2).astype(np.int64)
    if (pts[:, 0] < 0).any() or (pts[:, 0] >= w).any() \
            or (pts[:, 1] < 0).any() or (pts[:, 1] >= h).any():
        raise EmptySeedSet(f"seed outside {w}x{h} grid")
    seed_mask = np.zeros((h, w), dtype=bool)
    seed_mask[pts[:, 1], pts[:, 0]] = True
    return ndimage.distance_transform_edt(~seed_mask)


def iou(a, b) -> float:
    ma, mb = as_mask(a), as_mask(b)
    if ma.shape != mb.shape:
        raise ShapeMismatch(f"iou shapes differ: {ma.shape} vs {mb.shape}")
    union = int(np.count_nonzero(ma | mb))
    if union == 0:
        return 1.0
    return int(np.count_nonzero(ma & mb)) / union


def _bresenham(x0: int, y0: int, x1: int, y1: int) -> list[tuple[int, int]]:
    # 8-connected segment, both endpoints included
    dx = abs(x1 - x0)
    dy = abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx - dy
    out = []
    x, y = x0, y0
    while True:
        out.append((x, y))
        if x == x1 and y == y1:
            return out
        e2 = 2 * err
        if e2 > -dy:
            err -= dy
            x += sx
        if e2 < dx:
            err += dx
            y += sy


def rasterize_polyline(points, closed: bool, dims) -> np.ndarray:
    """8-connected pixels of the segments joining consecutive points (plus
    last-to-first when closed). Sub-pixel points are rounded; pixels outside
    ``dims`` are dropped. Returns unique (N, 2) int32 (x, y), row-major order.
    """
    pts = [(int(round(float(p[0]))), int(round(float(p[1])))) for p in points]
    if len(pts) < 2:
        raise TooFewPoints(f"polyline needs >= 2 points, got {len(pts)}")
    w, h = int(dims[0]), int(dims[1])
    segs = list(zip(pts[:-1], pts[1:]))
    if closed and len(pts) >= 3:
        segs.append((pts[-1], pts[0]))
    acc: set[tuple[int, int]] = set()
    for (ax, ay), (bx, by) in segs:
        acc.update(_bresenham(ax, ay, bx, by))
    kept = [(x, y) for (x, y) in acc if 0 <= x < w and 0 <= y < h]
    kept.sort(key=lambda p: (p[1], p[0]))
    return np.asarray(kept, dtype=np.int32).reshape(-1, 2)


def connected_components(mask) -> list[np.ndarray]:
    """8-connected components, each as a full-size mask, in label order."""
    m = as_mask(mask)
    labels, n = ndimage.label(m, structure=_FULL_STRUCT)
    return [labels == i for i in range(1, n + 1)]


def _convex_hull(pts: np.ndarray) -> np.ndarray:
    """Monotone-chain hull, counterclockwise in (x, y) numbers. Collinear
    inputs collapse to the two extreme points; a single point to itself."""
    p = np.unique(pts, axis=0)  # sorted by x, then y
    if len(p) <= 2:
        return p.astype(float)

    def turn(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def half(seq):
        out = []
        for q in seq:
            while len(out) >= 2 and turn(out[-2], out[-1], q) <= 0:
                out.pop()
            out.append(q)
        return out

    lower = half(p)
    upper = half(p[::-1])
    hull = np.asarray(lower[:-1] + upper[:-1], dtype=float)
    if len(hull) < 3:  # all collinear
        return np.asarray([p[0], p[-1]], dtype=float)
    return hull


def fill_convex_hull(points, dims) -> np.ndarray:
    """Raster of the filled convex hull: every pixel whose center lies inside
    or on the hull. Collinear or single inputs yield the discrete segment or
    pixel."""
    w, h = int(dims[0]), int(dims[1])
    pts = np.asarray([(float(p[0]), float(p[1])) for p in points], dtype=float)
    if len(pts) == 0:
        raise TooFewPoints("fill_convex_hull needs at least one point")
    out = np.zeros((h, w), dtype=bool)
    hull = _convex_hull(pts)
    if len(hull) == 1:
        x, y = int(round(hull[0][0])), int(round(hull[0][1]))
        if 0 <= x < w and 0 <= y < h:
            out[y, x] = True
        return out
    if len(hull) == 2:
        seg = rasterize_polyline(hull, closed=False, dims=dims)
        out[seg[:, 1], seg[:, 0]] = True
        return out

    eps = 1e-9 * max(1.0, float(np.abs(hull).max()))
    x0 = max(int(np.floor(hull[:, 0].min())), 0)
    x1 = min(int(np.ceil(hull[:, 0].max())) + 1, w)
    y0 = max(int(np.floor(hull[:, 1].min())), 0)
    y1 = min(int(np.ceil(hull[:, 1].max())) + 1, h)
    if x1 <= x0 or y1 <= y0:
        return out
    xs = np.arange(x0, x1, dtype=float)
    ys = np.arange(y0, y1, dtype=float)
    gx, gy = np.meshgrid(xs, ys)
    inside = np.ones(gx.shape, dtype=bool)
    for i in range(len(hull)):
        ax, ay = hull[i]
        bx, by = hull[(i + 1) % len(hull)]
        cross = (bx - ax) * (gy - ay) - (by - ay) * (gx - ax)
        inside &= cross >= -eps
    out[y0:y1, x0:x1] = inside
    return out


def _nn_index(out_len: int, src_len: int) -> np.ndarray:
    idx = np.floor((np.arange(out_len) + 0.5) * src_len / out_len).astype(np.intp)
    return np.clip(idx, 0, src_len - 1)


def crop_resize_mask(mask, crop: CropRect, out_size: int) -> np.ndarray:
    """Cut the crop window out of ``mask`` and resize it to out_size x
    out_size with nearest-neighbor sampling (each axis scaled independently,
    so clipped non-square crops still come out square)."""
    m = as_mask(mask)
    if m.shape != (crop.image_h, crop.image_w):
        raise ShapeMismatch(
            f"mask {m.shape} does not match crop image {crop.image_h}x{crop.image_w}")
    sub = m[crop.y0:crop.y0 + crop.side_h, crop.x0:crop.x0 + crop.side_w]
    rows = _nn_index(out_size, crop.side_h)
    cols = _nn_index(out_size, crop.side_w)
    return sub[np.ix_(rows, cols)]


def paste_mask(crop_mask, crop: CropRect, full_dims) -> np.ndarray:
    """Write a crop-space mask back into a full-size blank mask, zero outside
    the crop window (nearest-neighbor on each axis)."""
    cm = as_mask(crop_mask)
    w, h = int(full_dims[0]), int(full_dims[1])
    if (w, h) != (crop.image_w, crop.image_h):
        raise ShapeMismatch(
            f"full dims {w}x{h} do not match crop image {crop.image_w}x{crop.image_h}")
    out = np.zeros((h, w), dtype=bool)
    rows = _nn_index(crop.side_h, cm.shape[0])
    cols = _nn_index(crop.side_w, cm.shape[1])
    out[crop.y0:crop.y0 + crop.side_h, crop.x0:crop.x0 + crop.side_w] = \
        cm[np.ix_(rows, cols)]
    return out


def load_mask(path) -> np.ndarray:
    """Read a mask PNG: 8-bit single channel, nonzero = foreground."""
    with Image.open(path) as im:
        arr = np.asarray(im.convert("L"))
    return arr > 0


def save_mask(mask, path) -> None:
    m = as_mask(mask)
    Image.fromarray((m.astype(np.uint8)) * 255, mode="L").save(path, format="PNG")
