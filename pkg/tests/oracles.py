"""Independent brute-force references shared by the unit and acceptance
tests. Everything here recomputes distances by direct O(N*S) scans and
re-derives the documented selection rules without touching the library's
distance-transform path."""

import math

import numpy as np
from scipy import ndimage

from contourseg.mask_ops import extract_contours, rasterize_polyline


def scan_min_dists(cands, refs):
    c = cands.astype(float)
    r = refs.astype(float)
    d2 = ((c[:, None, :] - r[None, :, :]) ** 2).sum(axis=2)
    return d2.min(axis=1)


def argmax_row_major_oracle(pixels, values, width):
    flat = pixels[:, 1].astype(np.int64) * width + pixels[:, 0]
    best = None
    for i in range(len(pixels)):
        if best is None or values[i] > values[best] or \
                (values[i] == values[best] and flat[i] < flat[best]):
            best = i
    return best


def geometric_oracle(contours, clicks, dims):
    w, h = dims
    pts = clicks.points()
    cx, cy = pts.mean(axis=0)
    ang = np.asarray([math.atan2(y - cy, x - cx) for x, y in pts])
    geo = rasterize_polyline(pts[np.argsort(ang, kind="stable")],
                             closed=len(pts) >= 3, dims=dims)

    exterior = [c for c in contours if c.kind == "exterior" and len(c.pixels)]
    interior = [c for c in contours if c.kind == "interior" and len(c.pixels)]
    dists = {id(c): scan_min_dists(c.pixels, geo) for c in exterior + interior}
    int_max = max((dists[id(c)].max() for c in interior), default=-np.inf)

    click_px = {(int(round(c.x)), int(round(c.y))) for c in clicks}

    def covered(c):
        on = sum(1 for p in c.pixels if tuple(p) in click_px)
        return on >= 3 or dists[id(c)].max() < int_max

    if interior and all(covered(c) for c in exterior):
        eligible = exterior + interior
    else:
        eligible = exterior
    pixels = np.concatenate([c.pixels for c in eligible])
    values = np.concatenate([dists[id(c)] for c in eligible])
    best = argmax_row_major_oracle(pixels, values, w)
    return tuple(pixels[best])


def corrective_oracle(gt, pred, delta_n):
    h, w = gt.shape
    error = gt ^ pred
    if not error.any():
        return []
    labels, n = ndimage.label(error, structure=np.ones((3, 3), bool))
    blobs = []
    for i in range(1, n + 1):
        b = labels == i
        ys, xs = np.nonzero(b)
        blobs.append((-int(b.sum()), int(ys[0]) * w + int(xs[0]), b))
    blobs.sort(key=lambda t: (t[0], t[1]))
    blobs = [b for _, _, b in blobs[:delta_n]]

    gt_px = extract_contours(gt).all_pixels()
    pred_nonempty = pred.any()
    if pred_nonempty:
        pred_px = extract_contours(pred).all_pixels()

    out = []
    for b in blobs:
        ys, xs = np.nonzero(b)
        bp = np.stack([xs, ys], axis=1)
        in_blob = b[gt_px[:, 1], gt_px[:, 0]]
        cand = gt_px[in_blob]
        if len(cand):
            if pred_nonempty:
                vals = scan_min_dists(cand, pred_px)
            else:
                cen = bp.mean(axis=0)
                d2 = ((bp - cen) ** 2).sum(axis=1)
                med = bp[argmax_row_major_oracle(bp, -d2.astype(float), w)]
                vals = ((cand - med) ** 2).sum(axis=1).astype(float)
            k = argmax_row_major_oracle(cand, vals, w)
            out.append(tuple(cand[k]))
        else:
            cen = bp.mean(axis=0)
            d2 = ((gt_px - cen) ** 2).sum(axis=1).astype(float)
            k = argmax_row_major_oracle(gt_px, -d2, w)
            out.append(tuple(gt_px[k]))
    return out


def random_blobby_mask(rng, size):
    m = np.zeros((size, size), dtype=bool)
    for _ in range(int(rng.integers(1, 4))):
        cx, cy = rng.uniform(size * 0.2, size * 0.8, size=2)
        r = rng.uniform(size * 0.08, size * 0.3)
        ys, xs = np.mgrid[0:size, 0:size].astype(float)
        m |= (xs - cx) ** 2 + (ys - cy) ** 2 <= r * r
    if rng.random() < 0.4 and m.sum() > 200:
        cx, cy = rng.uniform(size * 0.35, size * 0.65, size=2)
        ys, xs = np.mgrid[0:size, 0:size].astype(float)
        m &= (xs - cx) ** 2 + (ys - cy) ** 2 > (size * 0.08) ** 2
    return m
