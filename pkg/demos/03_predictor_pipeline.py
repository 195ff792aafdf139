"""
From clicks to a full-image mask
================================

The pipeline: smallest circle of the clicks -> expanded crop -> bilinear
image resize + Gaussian click heatmap -> predictor -> binarize -> paste
back. The deterministic geometric baseline (pair-disk / convex hull) stands
in for a segmentation network, so each stage is visible.
"""

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from contourseg import BaselinePredictor, ClickSet, full_pipeline, iou
from contourseg.fixtures import render_image

OUT = __file__.replace("03_predictor_pipeline.py", "output")

size = 320
ys, xs = np.mgrid[0:size, 0:size].astype(float)
gt = ((xs - 160) / 95) ** 2 + ((ys - 150) / 70) ** 2 <= 1.0
image = render_image(gt, np.random.default_rng(5))

clicks = ClickSet()
clicks.add(65, 150, "human")
clicks.add(255, 150, "human")

stages = []
for extra in [None, (160, 80), (160, 220), (90, 100), (230, 200)]:
    if extra is not None:
        clicks.add(*extra, "human")
    pred = full_pipeline(image, clicks, BaselinePredictor())
    stages.append((len(clicks), pred, iou(gt, pred.mask_full)))
    print(f"n={len(clicks)}: IoU={stages[-1][2]:.3f} "
          f"crop={pred.crop.side_w}x{pred.crop.side_h}")

fig, axes = plt.subplots(1, len(stages) + 1, figsize=(4 * (len(stages) + 1), 4))
axes[0].imshow(image)
axes[0].set_title("image + target")
axes[0].contour(gt, colors="yellow", linewidths=1)
for ax, (n, pred, v) in zip(axes[1:], stages):
    ax.imshow(image)
    ax.imshow(np.ma.masked_where(~pred.mask_full, pred.mask_full),
              alpha=0.45, cmap="autumn")
    pts = clicks.points()[:n]
    ax.plot(pts[:, 0], pts[:, 1], "o", c="lime", ms=6)
    ax.set_title(f"{n} clicks, IoU {v:.3f}")
for ax in axes:
    ax.set_axis_off()
import os
os.makedirs(OUT, exist_ok=True)
fig.savefig(f"{OUT}/pipeline_stages.png", dpi=100, bbox_inches="tight")
print(f"wrote {OUT}/pipeline_stages.png")
