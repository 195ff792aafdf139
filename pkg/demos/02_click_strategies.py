"""
Simulated click strategies
==========================

How the simulator places clicks on a target contour:

* the initial pair lands at a separation close to a draw from
  N(1, 0.03) times the farthest contour pair,
* the geometric strategy repeatedly clicks the contour pixel farthest from
  the polygon through the existing clicks (farthest-point refinement),
* the corrective strategy clicks the ground-truth contour pixel farthest
  from a prediction's contour, one click per erroneous blob.
"""

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from contourseg import (PairSamplingParams, extract_contours,
                        next_click_geometric, next_clicks_corrective,
                        sample_initial_pair)

OUT = __file__.replace("02_click_strategies.py", "output")


def star_mask(size, cx, cy, base, amp, lobes):
    ys, xs = np.mgrid[0:size, 0:size].astype(float)
    ang = np.arctan2(ys - cy, xs - cx)
    return np.hypot(xs - cx, ys - cy) <= base * (1 + amp * np.sin(lobes * ang))


gt = star_mask(200, 100, 100, 60, 0.25, 5)
contours = extract_contours(gt)

# Initial pair, then six geometric refinements.
clicks = sample_initial_pair(gt, PairSamplingParams(), seed=11)
trail = [c.point for c in clicks]
for _ in range(6):
    c = next_click_geometric(contours, clicks, (200, 200))
    clicks.append(c)
    trail.append(c.point)
print("geometric click trail:", [(round(x), round(y)) for x, y in trail])

# A deliberately bad prediction (shifted disk) to trigger corrective clicks.
ys, xs = np.mgrid[0:200, 0:200].astype(float)
pred = (xs - 120) ** 2 + (ys - 90) ** 2 <= 45 ** 2
corrective = next_clicks_corrective(gt, pred, delta_n=3)
print("corrective clicks:", [(c.x, c.y) for c in corrective])

fig, axes = plt.subplots(1, 2, figsize=(11, 5))
axes[0].imshow(gt, cmap="gray")
xs_t, ys_t = zip(*trail)
axes[0].plot(xs_t[:2], ys_t[:2], "o", c="lime", ms=9, label="initial pair")
axes[0].plot(xs_t[2:], ys_t[2:], "o", c="orange", ms=7, label="geometric")
for i, (x, y) in enumerate(trail, 1):
    axes[0].annotate(str(i), (x + 3, y - 3), color="w", fontsize=8)
axes[0].set_title("geometric strategy molds clicks to the shape")
axes[0].legend()

axes[1].imshow(gt.astype(int) + 2 * pred.astype(int), cmap="viridis")
cx, cy = zip(*[(c.x, c.y) for c in corrective])
axes[1].plot(cx, cy, "o", c="red", ms=9, label="corrective clicks")
axes[1].set_title("corrective clicks hit the worst error blobs")
axes[1].legend()
import os
os.makedirs(OUT, exist_ok=True)
fig.savefig(f"{OUT}/click_strategies.png", dpi=110, bbox_inches="tight")
print(f"wrote {OUT}/click_strategies.png")
