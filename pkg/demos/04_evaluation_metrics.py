"""
Evaluation harness: NoC, mIoU-vs-clicks, and crop-loss calibration
==================================================================

Runs the three analyses on a freshly generated synthetic suite:

* NoC@85% with the baseline predictor (disks land at 7-8 clicks, exactly
  where the inscribed-polygon area ratio crosses 0.85),
* the mean-IoU-after-n-clicks curve,
* enclosure loss vs crop expansion ratio (the 1.4 calibration point).
"""

import json
import tempfile
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from contourseg import (BaselinePredictor, EvalConfig, PairSamplingParams,
                        crop_loss_analysis, evaluate_miou_curve, evaluate_noc,
                        load_dataset, write_report)
from contourseg.fixtures import generate_dataset, generate_disk_suite

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

work = Path(tempfile.mkdtemp(prefix="contourseg_demo_"))
pinned_pair = PairSamplingParams(ratio_mean=0.95, ratio_std=0.03,
                                 ratio_clamp=(0.85, 0.97))

# --- NoC on disks -----------------------------------------------------------
disks = load_dataset(generate_disk_suite(work / "disks", 10, seed=1))
cfg = EvalConfig(iou_threshold=0.85, max_clicks=20, seed=42,
                 pair_params=pinned_pair)
noc_report = evaluate_noc(disks, BaselinePredictor(), cfg)
print(f"NoC@85% mean over disks: {noc_report.noc_mean:.2f} "
      f"(per instance: {[r.noc for r in noc_report.instances]})")
write_report(noc_report, OUT / "noc_report.json", "json")

# --- mIoU curve on a mixed suite -------------------------------------------
mixed = load_dataset(generate_dataset(work / "mixed", 15, size=192, seed=2))
curve_report = evaluate_miou_curve(mixed, BaselinePredictor(), cfg, n_max=10)
print("mIoU curve:", [(n, round(v, 3)) for n, v in curve_report.miou_curve])

# --- crop loss vs expansion ratio -------------------------------------------
suite = load_dataset(generate_dataset(work / "suite", 60, size=192, seed=3))
ratios = [round(r, 2) for r in np.arange(1.0, 1.91, 0.05)]
pair95 = PairSamplingParams(ratio_mean=0.95, ratio_std=0.0,
                            ratio_clamp=(0.01, 1.0))
table = crop_loss_analysis(suite, ratios, pair95, seed=42)
loss14 = dict(table)[1.4]
print(f"mean enclosure loss at ratio 1.4: {loss14:.4%}")

fig, axes = plt.subplots(1, 2, figsize=(11, 4.2))
ns, vs = zip(*curve_report.miou_curve)
axes[0].plot(ns, vs, "o-")
axes[0].axhline(0.85, color="gray", ls=":")
axes[0].set_xlabel("clicks")
axes[0].set_ylabel("mean IoU")
axes[0].set_title("mean IoU after n clicks (baseline predictor)")
rr, ll = zip(*table)
axes[1].plot(rr, ll, "o-")
axes[1].axvline(1.4, color="tab:red", ls="--", label="chosen ratio 1.4")
axes[1].set_xlabel("expansion ratio")
axes[1].set_ylabel("mean enclosure loss")
axes[1].set_title("crop loss vs expansion ratio")
axes[1].legend()
fig.savefig(OUT / "evaluation_metrics.png", dpi=110, bbox_inches="tight")
print(f"wrote {OUT}/evaluation_metrics.png and {OUT}/noc_report.json")
