"""Command-line entry points: evaluation runs, mIoU curves, crop-loss
analysis, synthetic fixture generation, and the interactive session server."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import evaluation, fixtures
from .click_sim import PairSamplingParams, SimulationParams
from .errors import ContourSegError, CorruptInstance
from .service import create_app, resolve_predictor

EXIT_OK = 0
EXIT_CORRUPT = 2
EXIT_PREDICTOR = 3


def parse_ratios(spec: str) -> list[float]:
    """Either 'start:stop:step' (stop inclusive) or a comma list."""
    if ":" in spec:
        start, stop, step = (float(v) for v in spec.split(":"))
        return [float(r) for r in np.arange(start, stop + step / 2, step)]
    return [float(v) for v in spec.split(",")]


def _add_common_eval_args(p):
    p.add_argument("--dataset", required=True, help="dataset root (index.json inside)")
    p.add_argument("--predictor", default="baseline",
                   help="'baseline' or 'external:http://host:port'")
    p.add_argument("--threshold", type=float, default=0.85)
    p.add_argument("--max-clicks", type=int, default=20)
    p.add_argument("--delta-n", type=int, default=1)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--workers", type=int, default=None,
                   help="parallel instances (env CONTOURSEG_WORKERS overrides)")
    p.add_argument("--out", required=True, help="report output path")
    p.add_argument("--format", choices=["json", "csv"], default="json")


def _config_from_args(args) -> evaluation.EvalConfig:
    return evaluation.EvalConfig(
        iou_threshold=args.threshold,
        max_clicks=args.max_clicks,
        seed=args.seed,
        sim_params=SimulationParams(corrective_batch=args.delta_n),
        workers=args.workers,
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="contourseg",
        description="Contour-click interactive segmentation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="NoC@threshold evaluation")
    _add_common_eval_args(p_eval)

    p_curve = sub.add_parser("curve", help="mean IoU vs number of clicks")
    _add_common_eval_args(p_curve)
    p_curve.add_argument("--n-max", type=int, default=10)

    p_crop = sub.add_parser("crop-analysis", help="enclosure loss vs expansion ratio")
    p_crop.add_argument("--dataset", required=True)
    p_crop.add_argument("--ratios", default="1.0:1.9:0.05")
    p_crop.add_argument("--pair-ratio", type=float, default=0.95)
    p_crop.add_argument("--seed", type=int, default=42)
    p_crop.add_argument("--out", required=True)

    p_fix = sub.add_parser("fixtures", help="generate a synthetic dataset")
    p_fix.add_argument("--count", type=int, default=200)
    p_fix.add_argument("--out", required=True)
    p_fix.add_argument("--size", type=int, default=192)
    p_fix.add_argument("--seed", type=int, default=0)
    p_fix.add_argument("--suite", choices=["mixed", "disks", "convex"],
                       default="mixed")

    p_serve = sub.add_parser("serve", help="run the interactive session service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8080)
    p_serve.add_argument("--predictor", default="baseline")
    p_serve.add_argument("--session-ttl", type=float, default=1800)
    p_serve.add_argument("--max-image-pixels", type=int, default=16777216)
    p_serve.add_argument("--cors-origin", action="append", default=None,
                         help="allowed CORS origin (repeatable; default *)")

    args = parser.parse_args(argv)

    try:
        if args.command == "eval":
            dataset = evaluation.load_dataset(args.dataset)
            report = evaluation.evaluate_noc(dataset, resolve_predictor(args.predictor),
                                             _config_from_args(args))
            evaluation.write_report(report, args.out, args.format)
            print(f"noc_mean={report.noc_mean:.4f} over {len(report.instances)} "
                  f"instances ({report.timing_seconds:.1f}s) -> {args.out}")
            if any(r.failed for r in report.instances):
                return EXIT_PREDICTOR
        elif args.command == "curve":
            dataset = evaluation.load_dataset(args.dataset)
            report = evaluation.evaluate_miou_curve(
                dataset, resolve_predictor(args.predictor),
                _config_from_args(args), n_max=args.n_max)
            evaluation.write_report(report, args.out, args.format)
            for n, v in report.miou_curve:
                print(f"miou@{n} = {v:.4f}")
            if any(r.failed for r in report.instances):
                return EXIT_PREDICTOR
        elif args.command == "crop-analysis":
            dataset = evaluation.load_dataset(args.dataset)
            pair = PairSamplingParams(ratio_mean=args.pair_ratio, ratio_std=0.0,
                                      ratio_clamp=(0.01, 1.0))
            table = evaluation.crop_loss_analysis(dataset, parse_ratios(args.ratios),
                                                  pair, args.seed)
            import json
            with open(args.out, "w") as f:
                json.dump({"crop_loss": [[r, l] for r, l in table]}, f, indent=2)
            for r, l in table:
                print(f"ratio {r:.2f}: mean loss {l:.4f}")
        elif args.command == "fixtures":
            if args.suite == "disks":
                fixtures.generate_disk_suite(args.out, args.count, size=max(args.size, 384),
                                             seed=args.seed)
            elif args.suite == "convex":
                fixtures.generate_convex_suite(args.out, args.count,
                                               size=max(args.size, 384), seed=args.seed)
            else:
                fixtures.generate_dataset(args.out, args.count, size=args.size,
                                          seed=args.seed)
            print(f"wrote {args.count} instances to {args.out}")
        elif args.command == "serve":
            import uvicorn
            app = create_app(predictor_spec=args.predictor,
                             session_ttl=args.session_ttl,
                             max_image_pixels=args.max_image_pixels,
                             cors_origins=args.cors_origin or ("*",))
            uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    except CorruptInstance as e:
        print(f"corrupt instance: {e}", file=sys.stderr)
        return EXIT_CORRUPT
    except ContourSegError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PREDICTOR
    except ValueError as e:
        print(f"invalid arguments: {e}", file=sys.stderr)
        return 1
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
