"""Dataset ingestion, the iterative click-refinement evaluation protocol,
NoC@x% and mIoU-vs-clicks metrics, the crop-loss calibration analysis, and
report serialization.

Instances are evaluated independently and may run in parallel; every
instance derives its own seed from (run seed, instance id), so reports are
bit-identical regardless of worker count or scheduling order.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .click_sim import (PairSamplingParams, SimulationParams,
                        next_clicks_corrective, sample_initial_pair)
from .errors import ContourSegError, CorruptInstance, DatasetNotFound
from .geometry import CropParams, expand_to_crop, smallest_enclosing_circle
from .mask_ops import iou, load_mask
from .predictor import EncodingParams, full_pipeline

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Instance:
    instance_id: str
    image_path: Path
    mask_path: Path
    category: str | None = None

    def load_image(self) -> np.ndarray:
        with Image.open(self.image_path) as im:
            return np.asarray(im.convert("RGB"))

    def load_mask(self) -> np.ndarray:
        return load_mask(self.mask_path)


@dataclass
class Dataset:
    root: Path
    instances: list[Instance]

    def __len__(self):
        return len(self.instances)


def load_dataset(root) -> Dataset:
    """Read root/index.json and validate every instance: the mask must load,
    be non-empty, and match its image's dimensions."""
    root = Path(root)
    index = root / "index.json"
    if not index.is_file():
        raise DatasetNotFound(f"no index.json under {root}")
    with open(index) as f:
        spec = json.load(f)
    entries = spec.get("instances", [])
    if not entries:
        log.warning("dataset %s has an empty instance list", root)

    instances = []
    for e in entries:
        inst = Instance(instance_id=e["id"], image_path=root / e["image"],
                        mask_path=root / e["mask"], category=e.get("category"))
        try:
            with Image.open(inst.image_path) as im:
                img_size = im.size  # (w, h)
        except (OSError, ValueError) as err:
            raise CorruptInstance(inst.instance_id,
                                  f"unreadable image {inst.image_path}: {err}")
        try:
            mask = inst.load_mask()
        except (OSError, ValueError) as err:
            raise CorruptInstance(inst.instance_id,
                                  f"unreadable mask {inst.mask_path}: {err}")
        if (mask.shape[1], mask.shape[0]) != img_size:
            raise CorruptInstance(
                inst.instance_id,
                f"mask {inst.mask_path} is {mask.shape[1]}x{mask.shape[0]} but "
                f"image {inst.image_path} is {img_size[0]}x{img_size[1]}")
        if not mask.any():
            raise CorruptInstance(inst.instance_id,
                                  f"mask {inst.mask_path} has no foreground")
        instances.append(inst)
    return Dataset(root=root, instances=instances)


@dataclass
class EvalConfig:
    iou_threshold: float = 0.85
    max_clicks: int = 20
    seed: int = 42
    pair_params: PairSamplingParams = field(default_factory=PairSamplingParams)
    sim_params: SimulationParams = field(default_factory=SimulationParams)
    crop_params: CropParams = field(default_factory=CropParams)
    enc_params: EncodingParams = field(default_factory=EncodingParams)
    workers: int | None = None

    def __post_init__(self):
        if not (0 < self.iou_threshold < 1):
            raise ValueError(f"iou_threshold must lie in (0, 1), got {self.iou_threshold}")
        if self.max_clicks < 2:
            raise ValueError(f"max_clicks must be >= 2, got {self.max_clicks}")

    def to_dict(self) -> dict:
        return {
            "iou_threshold": self.iou_threshold,
            "max_clicks": self.max_clicks,
            "seed": self.seed,
            "delta_n": self.sim_params.corrective_batch,
            "pair_params": {
                "ratio_mean": self.pair_params.ratio_mean,
                "ratio_std": self.pair_params.ratio_std,
                "ratio_clamp": list(self.pair_params.ratio_clamp),
                "contour_subsample": self.pair_params.contour_subsample,
            },
            "sim_params": {
                "n_add_range": list(self.sim_params.n_add_range),
                "noise_std": self.sim_params.noise_std,
                "corrective_batch": self.sim_params.corrective_batch,
            },
            "crop_params": {
                "expansion_ratio": self.crop_params.expansion_ratio,
                "min_diameter": self.crop_params.min_diameter,
                "target_size": self.crop_params.target_size,
            },
            "enc_params": {
                "sigma": self.enc_params.sigma,
                "binarize_threshold": self.enc_params.binarize_threshold,
            },
        }


@dataclass
class InstanceResult:
    instance_id: str
    trace: list[tuple[int, float]]    # (clicks, iou), starting at n=2
    noc: int
    reached: bool
    failed: bool = False
    error: str | None = None


@dataclass
class EvalReport:
    config: dict
    instances: list[InstanceResult]
    noc_mean: float
    miou_curve: list[tuple[int, float]]
    timing_seconds: float = 0.0

    def to_dict(self, include_timing: bool = False) -> dict:
        d = {
            "config": self.config,
            "instances": [{
                "id": r.instance_id,
                "trace": [[n, v] for n, v in r.trace],
                "noc": r.noc,
                "reached": r.reached,
                "failed": r.failed,
                "error": r.error,
            } for r in self.instances],
            "noc_mean": self.noc_mean,
            "miou_curve": [[n, v] for n, v in self.miou_curve],
        }
        if include_timing:
            d["timing_seconds"] = self.timing_seconds
        return d


def instance_seed(seed: int, instance_id: str) -> int:
    """Stable per-instance seed, independent of evaluation order."""
    digest = hashlib.blake2s(instance_id.encode("utf-8"), digest_size=8).digest()
    ss = np.random.SeedSequence([int(seed), int.from_bytes(digest, "big")])
    return int(ss.generate_state(1, np.uint64)[0])


def run_instance_trace(image, gt, predictor, config: EvalConfig, seed: int,
                       n_max: int, stop_iou: float | None) -> list[tuple[int, float]]:
    """Click-refinement loop for one instance: initial pair, then corrective
    batches until ``stop_iou`` is crossed (when given) or the click budget
    ``n_max`` runs out. When no erroneous blob remains the last IoU holds."""
    delta = max(int(config.sim_params.corrective_batch), 1)
    clicks = sample_initial_pair(gt, config.pair_params, seed)
    gt_dims = (gt.shape[1], gt.shape[0])

    trace: list[tuple[int, float]] = []
    pred = full_pipeline(image, clicks, predictor,
                         config.crop_params, config.enc_params)
    value = iou(gt, pred.mask_full)
    trace.append((len(clicks), value))

    while len(clicks) < n_max and (stop_iou is None or value < stop_iou):
        budget = min(delta, n_max - len(clicks))
        new = next_clicks_corrective(gt, pred.mask_full, budget)
        if not new:
            break
        for c in new:
            clicks.append(c)
        pred = full_pipeline(image, clicks, predictor,
                             config.crop_params, config.enc_params)
        value = iou(gt, pred.mask_full)
        trace.append((len(clicks), value))
    return trace


def _evaluate_instances(dataset: Dataset, predictor, config: EvalConfig,
                        n_max: int, stop_iou: float | None) -> list[InstanceResult]:
    def one(inst: Instance) -> InstanceResult:
        seed = instance_seed(config.seed, inst.instance_id)
        try:
            trace = run_instance_trace(inst.load_image(), inst.load_mask(),
                                       predictor, config, seed, n_max, stop_iou)
        except ContourSegError as e:
            return InstanceResult(inst.instance_id, [], config.max_clicks,
                                  reached=False, failed=True, error=str(e))
        reached = [n for n, v in trace if v >= config.iou_threshold]
        noc = reached[0] if reached else config.max_clicks
        return InstanceResult(inst.instance_id, trace, noc, bool(reached))

    workers = config.workers
    env = os.environ.get("CONTOURSEG_WORKERS")
    if env:
        workers = int(env)
    if workers is None:
        workers = min(8, os.cpu_count() or 1)

    if workers <= 1:
        results = [one(i) for i in dataset.instances]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, dataset.instances))
    return results


def _curve_from_traces(results: list[InstanceResult], n_max: int) -> list[tuple[int, float]]:
    """Mean IoU at each click budget; each trace is read as a step function
    (the value at the largest recorded n not exceeding the budget)."""
    ok = [r for r in results if not r.failed and r.trace]
    curve = []
    for n in range(2, n_max + 1):
        vals = []
        for r in ok:
            held = [v for m, v in r.trace if m <= n]
            if held:
                vals.append(held[-1])
        if vals:
            curve.append((n, float(np.mean(vals))))
    return curve


def evaluate_noc(dataset: Dataset, predictor, config: EvalConfig) -> EvalReport:
    """Number-of-Clicks protocol: refine each instance until its IoU crosses
    the threshold or max_clicks is spent; never-reached instances count at
    the cap."""
    t0 = time.perf_counter()
    results = _evaluate_instances(dataset, predictor, config,
                                  n_max=config.max_clicks,
                                  stop_iou=config.iou_threshold)
    ok = [r for r in results if not r.failed]
    noc_mean = float(np.mean([r.noc for r in ok])) if ok else float("nan")
    curve = _curve_from_traces(results, config.max_clicks)
    return EvalReport(config=config.to_dict(), instances=results,
                      noc_mean=noc_mean, miou_curve=curve,
                      timing_seconds=time.perf_counter() - t0)


def evaluate_miou_curve(dataset: Dataset, predictor, config: EvalConfig,
                        n_max: int) -> EvalReport:
    """Mean IoU after n clicks for n in [2, n_max]: same traces as the NoC
    protocol but refinement is capped by the click budget, not the IoU
    threshold."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    t0 = time.perf_counter()
    results = _evaluate_instances(dataset, predictor, config,
                                  n_max=n_max, stop_iou=None)
    ok = [r for r in results if not r.failed]
    noc_mean = float(np.mean([r.noc for r in ok])) if ok else float("nan")
    curve = _curve_from_traces(results, n_max)
    return EvalReport(config=config.to_dict(), instances=results,
                      noc_mean=noc_mean, miou_curve=curve,
                      timing_seconds=time.perf_counter() - t0)


def crop_loss_analysis(dataset: Dataset, ratios, pair_params: PairSamplingParams,
                       seed: int, min_diameter: float = 16.0) -> list[tuple[float, float]]:
    """Mean enclosure loss per expansion ratio: simulate the two-click pair,
    crop the ground-truth mask with the pair circle expanded by each ratio,
    and measure the mask fraction left outside. The measurement is done at
    native resolution (no resize), isolating pure cropping loss."""
    ratios = [float(r) for r in ratios]
    if not ratios:
        raise ValueError("ratios must be non-empty")
    losses = {r: [] for r in ratios}
    for inst in dataset.instances:
        gt = inst.load_mask()
        h, w = gt.shape
        s = instance_seed(seed, inst.instance_id)
        clicks = sample_initial_pair(gt, pair_params, s)
        circle = smallest_enclosing_circle(clicks.points(), seed=0)
        total = int(gt.sum())
        for r in ratios:
            params = CropParams(expansion_ratio=r, min_diameter=min_diameter)
            crop = expand_to_crop(circle, params, (w, h))
            inside = int(gt[crop.y0:crop.y0 + crop.side_h,
                            crop.x0:crop.x0 + crop.side_w].sum())
            losses[r].append(1.0 - inside / total)
    return [(r, float(np.mean(losses[r]))) for r in ratios]


def report_json_bytes(report: EvalReport, include_timing: bool = False) -> bytes:
    payload = json.dumps(report.to_dict(include_timing), sort_keys=True,
                         indent=2) + "\n"
    return payload.encode("utf-8")


def write_report(report: EvalReport, path, format: str = "json",
                 include_timing: bool = False) -> None:
    """Serialize a report. JSON output is canonical (sorted keys, fixed
    layout) and byte-stable for identical reports; timing is left out unless
    requested, so determinism checks can compare files directly."""
    path = Path(path)
    try:
        if format == "json":
            path.write_bytes(report_json_bytes(report, include_timing))
        elif format == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf)
            writer.writerow(["instance_id", "n", "iou"])
            for r in report.instances:
                for n, v in r.trace:
                    writer.writerow([r.instance_id, n, repr(v)])
            writer.writerow(["summary", "noc_mean", repr(report.noc_mean)])
            for n, v in report.miou_curve:
                writer.writerow(["summary", f"miou@{n}", repr(v)])
            path.write_text(buf.getvalue())
        else:
            raise ValueError(f"unknown report format {format!r}")
    except OSError as e:
        raise OSError(f"cannot write report to {path}: {e}") from e
