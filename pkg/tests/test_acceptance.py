"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line with its measured numbers. Run with `pytest -s
tests/test_acceptance.py` to see the lines; every tolerance is pinned here.
"""

import json
import time

import numpy as np

from contourseg import evaluation as ev
from contourseg import fixtures as fx
from contourseg import predictor as P
from contourseg.click_sim import (ClickSet, PairSamplingParams,
                                  next_click_geometric, next_clicks_corrective,
                                  sample_initial_pair)
from contourseg.errors import (ProtocolError, PredictorTimeout, ShapeMismatch)
from contourseg.geometry import (CropParams, brute_force_sec, expand_to_crop,
                                 smallest_enclosing_circle)
from contourseg.mask_ops import extract_contours, paste_mask
from contourseg.predictor import BaselinePredictor, ExternalPredictor

from conftest import WireServer, disk_mask
from oracles import corrective_oracle, geometric_oracle, random_blobby_mask

# Pinned pair regime for the disk NoC bracket: the criterion's analytic basis
# is the inscribed-polygon area crossing, which presumes the 2-click
# pair-disk stays under threshold; a ratio draw clamped at 1.0 would land the
# pair-diameter disk on the target immediately (IoU > 0.85), so the check
# pins the pair ratio to the 0.95-centred band.
NOC_PAIR_PARAMS = PairSamplingParams(ratio_mean=0.95, ratio_std=0.03,
                                     ratio_clamp=(0.85, 0.97))


def report(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
    print(f"\n{line}")
    assert ok, line


def test_criterion_1_smallest_circle_oracle_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2026)
    worst_radius = 0.0
    worst_slack = -np.inf
    for trial in range(10_000):
        n = int(rng.integers(1, 13))
        pts = rng.uniform(0.0, 1000.0, size=(n, 2))
        w = smallest_enclosing_circle(pts, seed=trial)
        b = brute_force_sec(pts)
        worst_radius = max(worst_radius, abs(w.radius - b.radius))
        d = np.hypot(pts[:, 0] - w.cx, pts[:, 1] - w.cy)
        worst_slack = max(worst_slack, float((d - w.radius).max()))
    elapsed = time.perf_counter() - t0
    ok = worst_radius <= 1e-9 and worst_slack <= 1e-7 and elapsed < 10.0
    report("criterion 1 (smallest-circle oracle equivalence)", ok,
           f"10000 sets, max radius diff {worst_radius:.2e} (<=1e-9), "
           f"max enclosure slack {worst_slack:.2e} (<=1e-7), {elapsed:.1f}s (<10s)")


def test_criterion_2_crop_loss_calibration(tmp_path):
    t0 = time.perf_counter()
    root = fx.generate_dataset(tmp_path / "suite200", 200, size=192, seed=20)
    dataset = ev.load_dataset(root)
    pair = PairSamplingParams(ratio_mean=0.95, ratio_std=0.0,
                              ratio_clamp=(0.01, 1.0))
    ratios = [round(r, 3) for r in np.arange(1.0, 1.9001, 0.05)]
    table = ev.crop_loss_analysis(dataset, ratios, pair, seed=42)
    losses = dict(table)
    loss_at_14 = losses[1.4]
    vals = [losses[r] for r in ratios]
    monotone = all(b <= a + 1e-12 for a, b in zip(vals[:-1], vals[1:]))
    elapsed = time.perf_counter() - t0
    ok = loss_at_14 < 0.02 and monotone and elapsed < 60.0
    report("criterion 2 (crop-loss calibration)", ok,
           f"200 masks, mean loss @1.4 = {loss_at_14:.4%} (<2%), "
           f"monotone={monotone}, {elapsed:.1f}s (<60s)")


def test_criterion_3_strategy_argmax_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(33)
    checked_geo = checked_corr = 0
    for trial in range(500):
        size = int(rng.integers(48, 129))
        gt = random_blobby_mask(rng, size)
        if gt.sum() < 30:
            gt = disk_mask(size, size // 2, size // 2, size // 3)
        cont = extract_contours(gt)
        px = cont.all_pixels()
        k = int(rng.integers(2, 7))
        clicks = ClickSet()
        for i in rng.choice(len(px), size=min(k, len(px)), replace=False):
            clicks.add(float(px[i][0]), float(px[i][1]), "initial")
        if len(clicks) >= 2:
            got = next_click_geometric(cont, clicks, (size, size))
            want = geometric_oracle(cont, clicks, (size, size))
            assert (got.x, got.y) == (float(want[0]), float(want[1])), \
                f"geometric mismatch on trial {trial}"
            checked_geo += 1

        pred = random_blobby_mask(rng, size)
        delta = int(rng.integers(1, 4))
        got_c = [(c.x, c.y) for c in next_clicks_corrective(gt, pred, delta)]
        want_c = [(float(x), float(y))
                  for x, y in corrective_oracle(gt, pred, delta)]
        assert got_c == want_c, f"corrective mismatch on trial {trial}"
        checked_corr += 1
    elapsed = time.perf_counter() - t0
    ok = checked_geo >= 490 and checked_corr == 500 and elapsed < 120.0
    report("criterion 3 (strategy-argmax oracle)", ok,
           f"{checked_geo} geometric + {checked_corr} corrective fixtures "
           f"exactly matched, {elapsed:.1f}s (<120s)")


def test_criterion_4_noc_analytic_bracket(tmp_path):
    t0 = time.perf_counter()
    root = fx.generate_disk_suite(tmp_path / "disks50", 50,
                                  radius_range=(80, 120), seed=40)
    dataset = ev.load_dataset(root)
    cfg = ev.EvalConfig(iou_threshold=0.85, max_clicks=20, seed=42,
                        pair_params=NOC_PAIR_PARAMS)
    rep = ev.evaluate_noc(dataset, BaselinePredictor(), cfg)
    nocs = [r.noc for r in rep.instances]
    in_bracket = all(6 <= n <= 8 for n in nocs) and all(
        r.reached for r in rep.instances)

    convex_root = fx.generate_convex_suite(tmp_path / "convex", 12, seed=41)
    convex = ev.load_dataset(convex_root)
    curve_rep = ev.evaluate_miou_curve(convex, BaselinePredictor(), cfg, n_max=8)
    # hull regime: from n=3 on, accumulated contour clicks grow the hull
    # inside the convex target, so the mean curve must not decrease
    hull_vals = [v for n, v in curve_rep.miou_curve if n >= 3]
    monotone = all(b >= a - 1e-9 for a, b in zip(hull_vals[:-1], hull_vals[1:]))
    elapsed = time.perf_counter() - t0
    ok = in_bracket and monotone and elapsed < 60.0
    report("criterion 4 (NoC analytic check)", ok,
           f"50 disk runs NoC in [6,8] (counts: "
           f"{ {n: nocs.count(n) for n in sorted(set(nocs))} }), analytic "
           f"bracket 0.827<0.85<0.871; convex mIoU curve monotone from n=3: "
           f"{monotone}; {elapsed:.1f}s (<60s)")


def test_criterion_5_pair_distribution_statistics():
    gt = disk_mask(256, 128, 128, 100)
    px = extract_contours(gt).all_pixels().astype(float)
    diff = px[:, None, :] - px[None, :, :]
    d_max = np.sqrt((diff ** 2).sum(axis=2)).max()

    ratios = []
    for seed in range(1000):
        cs = sample_initial_pair(gt, PairSamplingParams(), seed)
        p = cs.points()
        ratios.append(float(np.hypot(*(p[0] - p[1])) / d_max))
    mean_ratio = float(np.mean(ratios))

    def dump(seed):
        cs = sample_initial_pair(gt, PairSamplingParams(), seed)
        return json.dumps([[c.x, c.y, c.source, c.order] for c in cs]).encode()

    reproducible = all(dump(s) == dump(s) for s in (0, 7, 123))
    ok = 0.96 <= mean_ratio <= 1.00 and reproducible
    report("criterion 5 (pair-distribution statistics)", ok,
           f"1000 pairs, clamped-ratio mean {mean_ratio:.4f} in [0.96, 1.00], "
           f"byte-identical per seed: {reproducible}")


def test_criterion_6_determinism_across_workers(tmp_path):
    root = fx.generate_dataset(tmp_path / "det", 10, size=160, seed=60)
    dataset = ev.load_dataset(root)
    blobs = []
    for workers in (1, 4, 8):
        cfg = ev.EvalConfig(max_clicks=10, seed=123, workers=workers)
        rep = ev.evaluate_noc(dataset, BaselinePredictor(), cfg)
        blobs.append(ev.report_json_bytes(rep))
    ok = blobs[0] == blobs[1] == blobs[2]
    report("criterion 6 (determinism & parallel stability)", ok,
           f"workers 1/4/8 produced byte-identical {len(blobs[0])}-byte reports")


def test_criterion_7_protocol_conformance():
    rng = np.random.default_rng(70)
    img = rng.integers(0, 255, size=(300, 300, 3)).astype(np.uint8)
    clicks = ClickSet()
    for x, y in ((100, 150), (200, 150), (150, 90)):
        clicks.add(x, y, "human")

    with WireServer("echo") as server:
        ext = ExternalPredictor(server.endpoint, timeout=5)
        pred = P.full_pipeline(img, clicks, ext)
        circ = smallest_enclosing_circle(clicks.points(), seed=0)
        crop = expand_to_crop(circ, CropParams(), (300, 300))
        mi = P.assemble_input(img, crop, clicks, CropParams(), P.EncodingParams())
        heat8 = np.rint(np.clip(mi.heatmap, 0, 1) * 255).astype(np.uint8)
        expected = paste_mask(heat8.astype(float) / 255.0 >= 0.5, crop,
                              (300, 300))
        echo_ok = bool((pred.mask_full == expected).all())

    def raises(behavior, exc, **kw):
        with WireServer(behavior, **kw) as server:
            try:
                ExternalPredictor(server.endpoint, timeout=kw.get("timeout", 0.4)
                                  if behavior == "echo" else 5).predict(mi)
            except exc:
                return True
            return False

    wrong_size_ok = raises("wrong_size", ShapeMismatch)
    garbage_ok = raises("garbage", ProtocolError)
    missing_ok = raises("missing_key", ProtocolError)
    with WireServer("echo", delay=2.0) as server:
        try:
            ExternalPredictor(server.endpoint, timeout=0.3).predict(mi)
            timeout_ok = False
        except PredictorTimeout:
            timeout_ok = True
    try:
        ExternalPredictor("http://127.0.0.1:1", timeout=0.5).predict(mi)
        unreachable_ok = False
    except PredictorTimeout:
        unreachable_ok = True

    ok = all([echo_ok, wrong_size_ok, garbage_ok, missing_ok, timeout_ok,
              unreachable_ok])
    report("criterion 7 (protocol conformance)", ok,
           f"echo==binarized heatmap paste: {echo_ok}; wrong-size->"
           f"ShapeMismatch: {wrong_size_ok}; garbage->ProtocolError: "
           f"{garbage_ok}; missing-key->ProtocolError: {missing_ok}; "
           f"timeout->PredictorTimeout: {timeout_ok}; unreachable->"
           f"PredictorTimeout: {unreachable_ok}")
