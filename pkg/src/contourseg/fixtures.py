"""Synthetic mask/image suites so the evaluation harness and its tests run
without any external dataset: ellipses, convex polygons, stars, multi-blob
masks, and masks with holes, each rendered with a matching RGB image."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from PIL import Image

from .mask_ops import fill_convex_hull, save_mask

DEFAULT_KINDS = ("ellipse", "polygon", "star", "multi", "holed")


def _grid(size):
    ys, xs = np.mgrid[0:size, 0:size].astype(float)
    return xs, ys


def _disk(size, cx, cy, r):
    xs, ys = _grid(size)
    return (xs - cx) ** 2 + (ys - cy) ** 2 <= r * r


def _ellipse(size, cx, cy, a, b, theta):
    xs, ys = _grid(size)
    ct, st = np.cos(theta), np.sin(theta)
    u = (xs - cx) * ct + (ys - cy) * st
    v = -(xs - cx) * st + (ys - cy) * ct
    return (u / a) ** 2 + (v / b) ** 2 <= 1.0


def make_mask(kind: str, size: int, rng: np.random.Generator) -> np.ndarray:
    cx = size / 2 + rng.uniform(-size * 0.08, size * 0.08)
    cy = size / 2 + rng.uniform(-size * 0.08, size * 0.08)
    r_max = size * 0.38

    if kind == "disk":
        return _disk(size, cx, cy, rng.uniform(0.5, 1.0) * r_max)
    if kind == "ellipse":
        a = rng.uniform(0.45, 1.0) * r_max
        b = rng.uniform(0.35, 1.0) * r_max
        return _ellipse(size, cx, cy, a, b, rng.uniform(0, np.pi))
    if kind == "polygon":
        k = int(rng.integers(4, 9))
        angles = np.sort(rng.uniform(0, 2 * np.pi, size=k))
        rad = rng.uniform(0.55, 1.0) * r_max
        pts = np.stack([cx + rad * np.cos(angles) * rng.uniform(0.8, 1.0, k),
                        cy + rad * np.sin(angles) * rng.uniform(0.8, 1.0, k)], axis=1)
        return fill_convex_hull(pts, (size, size))
    if kind == "star":
        xs, ys = _grid(size)
        ang = np.arctan2(ys - cy, xs - cx)
        lobes = int(rng.integers(4, 8))
        base = rng.uniform(0.55, 0.85) * r_max
        amp = rng.uniform(0.15, 0.35)
        phase = rng.uniform(0, 2 * np.pi)
        rfun = base * (1.0 + amp * np.sin(lobes * ang + phase))
        return np.hypot(xs - cx, ys - cy) <= rfun
    if kind == "multi":
        n = int(rng.integers(2, 5))
        mask = np.zeros((size, size), dtype=bool)
        spread = size * 0.30
        for i in range(n):
            a = 2 * np.pi * i / n + rng.uniform(-0.3, 0.3)
            bx = size / 2 + spread * np.cos(a)
            by = size / 2 + spread * np.sin(a)
            mask |= _disk(size, bx, by, rng.uniform(0.10, 0.22) * size)
        return mask
    if kind == "holed":
        outer = rng.uniform(0.7, 1.0) * r_max
        mask = _disk(size, cx, cy, outer)
        hole = _disk(size, cx + rng.uniform(-0.2, 0.2) * outer,
                     cy + rng.uniform(-0.2, 0.2) * outer,
                     rng.uniform(0.25, 0.45) * outer)
        return mask & ~hole
    raise ValueError(f"unknown mask kind {kind!r}")


def render_image(mask: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    h, w = mask.shape
    fg = rng.integers(110, 230, size=3)
    bg = rng.integers(20, 90, size=3)
    img = np.empty((h, w, 3), dtype=np.uint8)
    img[:] = bg
    img[mask] = fg
    noise = rng.normal(0, 6, size=(h, w, 3))
    return np.clip(img.astype(float) + noise, 0, 255).astype(np.uint8)


def generate_dataset(out_dir, count: int, size: int = 192, seed: int = 0,
                     kinds=DEFAULT_KINDS) -> Path:
    """Write ``count`` instances (image PNG + mask PNG + index.json) under
    ``out_dir`` and return the dataset root."""
    root = Path(out_dir)
    (root / "images").mkdir(parents=True, exist_ok=True)
    (root / "masks").mkdir(parents=True, exist_ok=True)
    instances = []
    for i in range(count):
        rng = np.random.default_rng(np.random.SeedSequence([seed, i]))
        kind = kinds[i % len(kinds)]
        mask = make_mask(kind, size, rng)
        if mask.sum() < 16:  # degenerate draw; retry deterministically
            mask = make_mask(kind, size, np.random.default_rng(
                np.random.SeedSequence([seed, i, 1])))
        img = render_image(mask, rng)
        inst_id = f"{kind}_{i:04d}"
        image_rel = f"images/{inst_id}.png"
        mask_rel = f"masks/{inst_id}.png"
        Image.fromarray(img).save(root / image_rel)
        save_mask(mask, root / mask_rel)
        instances.append({"id": inst_id, "image": image_rel, "mask": mask_rel,
                          "category": kind})
    with open(root / "index.json", "w") as f:
        json.dump({"instances": instances}, f, indent=2)
    return root


def generate_disk_suite(out_dir, count: int, radius_range=(80.0, 120.0),
                        size: int = 384, seed: int = 0) -> Path:
    """Disk-only suite with radii spread across ``radius_range`` and jittered
    centers; sized so the expanded crop never clips."""
    root = Path(out_dir)
    (root / "images").mkdir(parents=True, exist_ok=True)
    (root / "masks").mkdir(parents=True, exist_ok=True)
    lo, hi = radius_range
    instances = []
    for i in range(count):
        rng = np.random.default_rng(np.random.SeedSequence([seed, i]))
        r = lo + (hi - lo) * (i / max(count - 1, 1))
        cx = size / 2 + rng.uniform(-8, 8)
        cy = size / 2 + rng.uniform(-8, 8)
        mask = _disk(size, cx, cy, r)
        img = render_image(mask, rng)
        inst_id = f"disk_{i:04d}"
        Image.fromarray(img).save(root / f"images/{inst_id}.png")
        save_mask(mask, root / f"masks/{inst_id}.png")
        instances.append({"id": inst_id, "image": f"images/{inst_id}.png",
                          "mask": f"masks/{inst_id}.png", "category": "disk"})
    with open(root / "index.json", "w") as f:
        json.dump({"instances": instances}, f, indent=2)
    return root


def generate_convex_suite(out_dir, count: int, size: int = 384,
                          seed: int = 0) -> Path:
    """Convex-target suite (disks, ellipses, convex polygons) for the hull
    monotonicity checks."""
    root = Path(out_dir)
    (root / "images").mkdir(parents=True, exist_ok=True)
    (root / "masks").mkdir(parents=True, exist_ok=True)
    kinds = ("disk", "ellipse", "polygon")
    instances = []
    for i in range(count):
        rng = np.random.default_rng(np.random.SeedSequence([seed, i]))
        kind = kinds[i % len(kinds)]
        cx = size / 2 + rng.uniform(-10, 10)
        cy = size / 2 + rng.uniform(-10, 10)
        if kind == "disk":
            mask = _disk(size, cx, cy, rng.uniform(85, 120))
        elif kind == "ellipse":
            mask = _ellipse(size, cx, cy, rng.uniform(80, 125),
                            rng.uniform(60, 110), rng.uniform(0, np.pi))
        else:
            k = int(rng.integers(5, 9))
            angles = np.sort(rng.uniform(0, 2 * np.pi, size=k))
            rad = rng.uniform(90, 125)
            pts = np.stack([cx + rad * np.cos(angles),
                            cy + rad * np.sin(angles)], axis=1)
            mask = fill_convex_hull(pts, (size, size))
        img = render_image(mask, rng)
        inst_id = f"{kind}_{i:04d}"
        Image.fromarray(img).save(root / f"images/{inst_id}.png")
        save_mask(mask, root / f"masks/{inst_id}.png")
        instances.append({"id": inst_id, "image": f"images/{inst_id}.png",
                          "mask": f"masks/{inst_id}.png", "category": kind})
    with open(root / "index.json", "w") as f:
        json.dump({"instances": instances}, f, indent=2)
    return root
