"""Simulated user behavior: the initial contour-pair draw, the geometric and
corrective refinement strategies, click-location noise, and training-sequence
generation.

All selections run on integer squared distances with ties broken by the
lowest row-major pixel index (y * width + x), so every operation is exactly
reproducible and matches a brute-force argmax scan bit for bit. Randomness
only enters through explicit seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import mask_ops
from .errors import EmptyMask, ShapeMismatch, TooSmallTarget
from .mask_ops import ContourSet, as_mask, connected_components, extract_contours


@dataclass(frozen=True)
class Click:
    x: float
    y: float
    source: str = "human"  # initial | geometric | corrective | human
    order: int = 1

    @property
    def point(self) -> tuple[float, float]:
        return (self.x, self.y)

    def pixel(self) -> tuple[int, int]:
        return (int(round(self.x)), int(round(self.y)))


class ClickSet:
    """Ordered click sequence; orders are kept consecutive from 1."""

    def __init__(self, clicks=()):
        self.clicks: list[Click] = []
        for c in clicks:
            self.append(c)

    def append(self, click: Click) -> Click:
        c = replace(click, order=len(self.clicks) + 1)
        self.clicks.append(c)
        return c

    def add(self, x: float, y: float, source: str = "human") -> Click:
        return self.append(Click(float(x), float(y), source))

    def pop(self) -> Click:
        return self.clicks.pop()

    def points(self) -> np.ndarray:
        return np.asarray([[c.x, c.y] for c in self.clicks], dtype=float).reshape(-1, 2)

    def copy(self) -> "ClickSet":
        return ClickSet(self.clicks)

    def __len__(self):
        return len(self.clicks)

    def __iter__(self):
        return iter(self.clicks)

    def __getitem__(self, i):
        return self.clicks[i]


@dataclass(frozen=True)
class PairSamplingParams:
    ratio_mean: float = 1.0
    ratio_std: float = 0.03
    ratio_clamp: tuple[float, float] = (0.85, 1.0)
    contour_subsample: int = 512

    def __post_init__(self):
        lo, hi = self.ratio_clamp
        if not (0 < lo <= hi <= 1):
            raise ValueError(f"ratio_clamp must satisfy 0 < lo <= hi <= 1, got {self.ratio_clamp}")
        if self.ratio_std < 0:
            raise ValueError(f"ratio_std must be >= 0, got {self.ratio_std}")
        if self.contour_subsample < 2:
            raise ValueError("contour_subsample must be >= 2")


@dataclass(frozen=True)
class SimulationParams:
    n_add_range: tuple[int, int] = (0, 8)
    noise_std: float = 3.0
    corrective_batch: int = 1

    def __post_init__(self):
        lo, hi = self.n_add_range
        if not (0 <= lo <= hi <= 32):
            raise ValueError(f"n_add_range must lie within [0, 32], got {self.n_add_range}")
        if self.noise_std < 0:
            raise ValueError(f"noise_std must be >= 0, got {self.noise_std}")
        if self.corrective_batch < 1:
            raise ValueError(f"corrective_batch must be >= 1, got {self.corrective_batch}")


def _sorted_pixels(pixels: np.ndarray, width: int) -> np.ndarray:
    flat = pixels[:, 1].astype(np.int64) * width + pixels[:, 0]
    return pixels[np.argsort(flat, kind="stable")]


def _squared_field(seeds: np.ndarray, dims) -> np.ndarray:
    # EDT distances are sqrt of integers; squaring + rint recovers the exact
    # integer squared distance, which makes argmax ties well defined.
    field = mask_ops.distance_transform(seeds, dims)
    return np.rint(field * field).astype(np.int64)


def _argmax_row_major(pixels: np.ndarray, values: np.ndarray, width: int):
    """Index of the max value; among equals, the lowest row-major pixel."""
    flat = pixels[:, 1].astype(np.int64) * width + pixels[:, 0]
    order = np.argsort(flat, kind="stable")
    best = order[np.argmax(values[order])]
    return int(best)


def sample_initial_pair(gt, params: PairSamplingParams, seed: int) -> ClickSet:
    """Draw the two starting clicks: a ratio r ~ N(mean, std) clamped to the
    configured range, then the contour pair whose separation is closest to
    r times the maximum pair separation."""
    gt = as_mask(gt)
    h, w = gt.shape
    contours = extract_contours(gt)
    pixels = _sorted_pixels(contours.all_pixels(), w)
    if len(pixels) < 2:
        raise TooSmallTarget(f"need >= 2 contour pixels, got {len(pixels)}")

    m = len(pixels)
    if m > params.contour_subsample:
        keep = np.unique(np.round(
            np.linspace(0, m - 1, params.contour_subsample)).astype(np.intp))
        pixels = pixels[keep]
        m = len(pixels)

    pts = pixels.astype(float)
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=2))
    iu, ju = np.triu_indices(m, k=1)
    pair_d = dist[iu, ju]
    d_max = pair_d.max()

    rng = np.random.default_rng(seed)
    lo, hi = params.ratio_clamp
    ratio = float(np.clip(rng.normal(params.ratio_mean, params.ratio_std), lo, hi))

    k = int(np.argmin(np.abs(pair_d - ratio * d_max)))
    a = pixels[iu[k]]
    b = pixels[ju[k]]
    out = ClickSet()
    out.add(float(a[0]), float(a[1]), "initial")
    out.add(float(b[0]), float(b[1]), "initial")
    return out


def _click_polygon_pixels(clicks: ClickSet, dims) -> np.ndarray:
    """Contour pixels of the polygon through the clicks: clicks ordered by
    angle around their centroid, then rasterized (closed once there are 3)."""
    pts = clicks.points()
    cx, cy = pts.mean(axis=0)
    angles = np.asarray([math.atan2(y - cy, x - cx) for x, y in pts])
    order = np.argsort(angles, kind="stable")
    ordered = pts[order]
    return mask_ops.rasterize_polyline(ordered, closed=len(pts) >= 3, dims=dims)


def next_click_geometric(gt_contours: ContourSet, clicks: ClickSet, dims) -> Click:
    """The ground-truth contour pixel farthest from the polygon through the
    existing clicks.

    Multi-region policy (coarse to fine): only exterior contours are
    eligible until each one either holds >= 3 clicks or has a max distance
    below the largest interior-contour distance; after that every contour is
    eligible.
    """
    w, h = int(dims[0]), int(dims[1])
    if not len(gt_contours) or gt_contours.all_pixels().size == 0:
        raise EmptyMask("no contour pixels to click")
    if len(clicks) < 2:
        raise TooSmallTarget("geometric strategy needs >= 2 existing clicks")

    geo = _click_polygon_pixels(clicks, dims)
    sq = _squared_field(geo, dims)

    click_flat = {int(round(c.y)) * w + int(round(c.x)) for c in clicks}
    exterior = [c for c in gt_contours if c.kind == "exterior" and len(c.pixels)]
    interior = [c for c in gt_contours if c.kind == "interior" and len(c.pixels)]

    def contour_values(c):
        return sq[c.pixels[:, 1], c.pixels[:, 0]]

    interior_max = max((int(contour_values(c).max()) for c in interior), default=-1)

    def covered(c):
        flat = c.pixels[:, 1].astype(np.int64) * w + c.pixels[:, 0]
        n_on = len(click_flat.intersection(flat.tolist()))
        return n_on >= 3 or int(contour_values(c).max()) < interior_max

    if interior and all(covered(c) for c in exterior):
        eligible = exterior + interior
    else:
        eligible = exterior

    pixels = np.concatenate([c.pixels for c in eligible], axis=0)
    values = sq[pixels[:, 1], pixels[:, 0]]
    best = _argmax_row_major(pixels, values, w)
    x, y = pixels[best]
    return Click(float(x), float(y), "geometric", len(clicks) + 1)


def _blob_medoid(blob_pixels: np.ndarray, width: int) -> np.ndarray:
    """Blob pixel closest to the blob centroid (row-major tie-break)."""
    centroid = blob_pixels.mean(axis=0)
    d2 = ((blob_pixels - centroid) ** 2).sum(axis=1)
    best = _argmax_row_major(blob_pixels, -d2, width)
    return blob_pixels[best]


def next_clicks_corrective(gt, pred, delta_n: int = 1) -> list[Click]:
    """One click per erroneous blob: partition gt XOR pred into 8-connected
    blobs, and in each of the ``delta_n`` largest pick the ground-truth
    contour pixel farthest from the prediction contour.

    False-positive blobs with no ground-truth contour inside contribute the
    ground-truth contour pixel nearest their centroid. With an empty
    prediction there is no prediction contour, so each blob contributes its
    ground-truth contour pixel farthest from the blob medoid instead.
    """
    gt = as_mask(gt)
    pred = as_mask(pred)
    if gt.shape != pred.shape:
        raise ShapeMismatch(f"gt {gt.shape} vs pred {pred.shape}")
    if not gt.any():
        raise EmptyMask("ground truth is empty")
    h, w = gt.shape
    dims = (w, h)

    error = gt ^ pred
    if not error.any():
        return []

    blobs = connected_components(error)
    def blob_key(b):
        ys, xs = np.nonzero(b)
        return (-int(b.sum()), int(ys[0]) * w + int(xs[0]))
    blobs.sort(key=blob_key)
    blobs = blobs[:max(int(delta_n), 1)]

    gt_px = extract_contours(gt).all_pixels()
    gt_contour_mask = np.zeros((h, w), dtype=bool)
    gt_contour_mask[gt_px[:, 1], gt_px[:, 0]] = True

    pred_has_fg = bool(pred.any())
    if pred_has_fg:
        pred_px = extract_contours(pred).all_pixels()
        sq_pred = _squared_field(pred_px, dims)

    out: list[Click] = []
    for i, blob in enumerate(blobs):
        ys, xs = np.nonzero(blob)
        blob_px = np.stack([xs, ys], axis=1).astype(np.int64)
        inside = gt_contour_mask[ys, xs]
        if inside.any():
            cand = blob_px[inside]
            if pred_has_fg:
                values = sq_pred[cand[:, 1], cand[:, 0]]
            else:
                medoid = _blob_medoid(blob_px, w)
                values = ((cand - medoid) ** 2).sum(axis=1)
            best = _argmax_row_major(cand, values, w)
            x, y = cand[best]
        else:
            centroid = blob_px.mean(axis=0)
            d2 = ((gt_px - centroid) ** 2).sum(axis=1)
            best = _argmax_row_major(gt_px, -d2, w)
            x, y = gt_px[best]
        out.append(Click(float(x), float(y), "corrective", i + 1))
    return out


def perturb_click(click: Click, noise_std: float, gt_contours: ContourSet,
                  seed: int) -> Click:
    """Isotropic Gaussian jitter followed by reprojection onto the nearest
    ground-truth contour pixel, so the click stays a contour click."""
    if noise_std < 0:
        raise ValueError("noise_std must be >= 0")
    if noise_std == 0:
        return click
    rng = np.random.default_rng(seed)
    ox, oy = rng.normal(0.0, noise_std, size=2)
    moved = np.asarray([click.x + ox, click.y + oy])
    pixels = gt_contours.all_pixels()
    d2 = ((pixels - moved) ** 2).sum(axis=1)
    best = _argmax_row_major(pixels, -d2, gt_contours.width)
    x, y = pixels[best]
    return replace(click, x=float(x), y=float(y))


def simulate_training_sequence(gt, params: SimulationParams,
                               pair: PairSamplingParams, seed: int) -> ClickSet:
    """Initial pair plus n_add ~ U[n_add_range] geometric clicks, each jittered
    by the configured location noise. Total length is 2 + n_add."""
    gt = as_mask(gt)
    h, w = gt.shape
    master = np.random.default_rng(seed)

    clicks = sample_initial_pair(gt, pair, int(master.integers(2 ** 63)))
    lo, hi = params.n_add_range
    n_add = int(master.integers(lo, hi + 1))
    contours = extract_contours(gt)
    for _ in range(n_add):
        c = next_click_geometric(contours, clicks, (w, h))
        c = perturb_click(c, params.noise_std, contours,
                          int(master.integers(2 ** 63)))
        clicks.append(c)
    return clicks
