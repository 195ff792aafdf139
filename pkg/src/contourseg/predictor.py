"""Everything between clicks and masks: Gaussian click encoding, 4-channel
input assembly, the predictor abstraction (deterministic geometric baseline
and an HTTP wire-protocol client), binarization, and the crop -> predict ->
paste pipeline.

Images are (H, W, 3) arrays, uint8 0..255 or float 0..1. Image channels are
resampled bilinearly; masks stay nearest-neighbor so labels remain hard.
"""

from __future__ import annotations

import base64
import io
import json
from dataclasses import dataclass, field

import numpy as np
import requests
from PIL import Image
from scipy import ndimage

from .click_sim import ClickSet
from .errors import (ProtocolError, PredictorTimeout, ShapeMismatch,
                     TooFewClicks)
from .geometry import (CropParams, CropRect, expand_to_crop, map_point,
                       smallest_enclosing_circle)
from .mask_ops import _convex_hull, fill_convex_hull, paste_mask


@dataclass(frozen=True)
class EncodingParams:
    sigma: float = 10.0            # Gaussian bandwidth, crop-space pixels
    binarize_threshold: float = 0.5

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if not (0 < self.binarize_threshold < 1):
            raise ValueError(
                f"binarize_threshold must lie in (0, 1), got {self.binarize_threshold}")


@dataclass
class ModelInput:
    image: np.ndarray              # (size, size, 3) float in [0, 1]
    heatmap: np.ndarray            # (size, size) float in [0, 1]
    size: int
    clicks: list[tuple[float, float]] = field(default_factory=list)  # crop space


@dataclass
class Prediction:
    probs: np.ndarray              # (size, size) float in [0, 1], crop space
    mask_full: np.ndarray          # (H, W) bool, full image
    crop: CropRect


def encode_clicks(clicks, size: int, params: EncodingParams) -> np.ndarray:
    """Max-combined Gaussian bumps, one per click, each normalized so its
    nearest grid pixel reads exactly 1.0. No clicks gives the zero grid."""
    grid = np.zeros((size, size), dtype=float)
    pts = [(float(np.clip(x, 0, size)), float(np.clip(y, 0, size)))
           for x, y in clicks]
    if not pts:
        return grid
    ys, xs = np.mgrid[0:size, 0:size].astype(float)
    inv = 1.0 / (2.0 * params.sigma ** 2)
    for cx, cy in pts:
        d2 = (xs - cx) ** 2 + (ys - cy) ** 2
        bump = np.exp(-d2 * inv)
        grid = np.maximum(grid, bump / bump.max())
    return grid


def _to_unit_image(image) -> np.ndarray:
    arr = np.asarray(image)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ShapeMismatch(f"expected (H, W, 3) image, got {arr.shape}")
    if np.issubdtype(arr.dtype, np.integer):
        return arr.astype(float) / 255.0
    return np.clip(arr.astype(float), 0.0, 1.0)


def assemble_input(image, crop: CropRect, clicks: ClickSet,
                   crop_params: CropParams, enc_params: EncodingParams) -> ModelInput:
    """Bilinear-resize the image crop to target_size and stack it with the
    click heatmap; clicks are mapped into crop space first."""
    arr = _to_unit_image(image)
    if arr.shape[:2] != (crop.image_h, crop.image_w):
        raise ShapeMismatch(
            f"image {arr.shape[:2]} does not match crop image "
            f"{crop.image_h}x{crop.image_w}")
    size = crop_params.target_size

    # Center-aligned sampling grid over the crop window.
    ys = crop.y0 + (np.arange(size) + 0.5) * crop.side_h / size - 0.5
    xs = crop.x0 + (np.arange(size) + 0.5) * crop.side_w / size - 0.5
    gy, gx = np.meshgrid(ys, xs, indexing="ij")
    coords = np.stack([gy, gx])
    resized = np.stack(
        [ndimage.map_coordinates(arr[:, :, c], coords, order=1, mode="nearest")
         for c in range(3)], axis=2)

    crop_clicks = [map_point(c.point, crop, size, "to_crop") for c in clicks]
    heatmap = encode_clicks(crop_clicks, size, enc_params)
    return ModelInput(image=resized, heatmap=heatmap, size=size, clicks=crop_clicks)


def _pair_disk(size: int, a, b) -> np.ndarray:
    cx, cy = (a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0
    r2 = ((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2) / 4.0
    ys, xs = np.mgrid[0:size, 0:size].astype(float)
    return ((xs - cx) ** 2 + (ys - cy) ** 2) <= r2 + 1e-9


class BaselinePredictor:
    """Deterministic geometric predictor: the pair-diameter disk for two
    clicks, the filled convex hull for three or more (falling back to the
    farthest-pair disk when all clicks are collinear). Ignores the image."""

    name = "baseline"

    def predict(self, model_input: ModelInput) -> np.ndarray:
        clicks = model_input.clicks
        size = model_input.size
        if len(clicks) < 2:
            raise TooFewClicks(f"baseline needs >= 2 clicks, got {len(clicks)}")
        if len(clicks) == 2:
            mask = _pair_disk(size, clicks[0], clicks[1])
        else:
            pts = np.asarray(clicks, dtype=float)
            if len(_convex_hull(pts)) < 3:
                diff = pts[:, None, :] - pts[None, :, :]
                d2 = (diff ** 2).sum(axis=2)
                i, j = np.unravel_index(np.argmax(d2), d2.shape)
                mask = _pair_disk(size, pts[i], pts[j])
            else:
                mask = fill_convex_hull(pts, (size, size))
        return mask.astype(float)


def _png_b64(arr: np.ndarray, mode: str) -> str:
    img = Image.fromarray(arr, mode=mode)
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return base64.b64encode(buf.getvalue()).decode("ascii")


def _b64_png(data: str) -> np.ndarray:
    raw = base64.b64decode(data, validate=True)
    with Image.open(io.BytesIO(raw)) as im:
        return np.asarray(im.convert("L"))


def encode_wire_request(model_input: ModelInput) -> dict:
    image8 = np.rint(np.clip(model_input.image, 0, 1) * 255).astype(np.uint8)
    heat8 = np.rint(np.clip(model_input.heatmap, 0, 1) * 255).astype(np.uint8)
    return {
        "size": model_input.size,
        "image": _png_b64(image8, "RGB"),
        "heatmap": _png_b64(heat8, "L"),
        "clicks": [{"x": float(x), "y": float(y)} for x, y in model_input.clicks],
    }


def decode_wire_response(payload: dict, expected_size: int) -> np.ndarray:
    try:
        probs8 = _b64_png(payload["probs"])
    except (KeyError, TypeError, ValueError, OSError) as e:
        raise ProtocolError(f"bad predictor response: {e}") from e
    if probs8.shape != (expected_size, expected_size):
        raise ShapeMismatch(
            f"predictor returned {probs8.shape}, expected "
            f"({expected_size}, {expected_size})")
    return probs8.astype(float) / 255.0


class ExternalPredictor:
    """Client for the HTTP predictor protocol: POST {endpoint}/predict with
    the JSON-encoded model input, probability grid comes back as an 8-bit
    PNG (value/255 <-> probability)."""

    name = "external"

    def __init__(self, endpoint: str, timeout: float = 10.0):
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self._session = requests.Session()

    def predict(self, model_input: ModelInput) -> np.ndarray:
        body = encode_wire_request(model_input)
        try:
            resp = self._session.post(f"{self.endpoint}/predict", json=body,
                                      timeout=self.timeout)
        except (requests.Timeout, requests.ConnectionError) as e:
            raise PredictorTimeout(
                f"predictor at {self.endpoint} unreachable: {e}") from e
        if resp.status_code != 200:
            raise ProtocolError(
                f"predictor returned HTTP {resp.status_code}")
        try:
            payload = resp.json()
        except (json.JSONDecodeError, ValueError) as e:
            raise ProtocolError(f"non-JSON predictor response: {e}") from e
        return decode_wire_response(payload, model_input.size)


def external_predict(endpoint: str, model_input: ModelInput,
                     timeout: float = 10.0) -> np.ndarray:
    return ExternalPredictor(endpoint, timeout).predict(model_input)


def binarize(probs: np.ndarray, threshold: float = 0.5) -> np.ndarray:
    return np.asarray(probs, dtype=float) >= threshold


def full_pipeline(image, clicks: ClickSet, predictor,
                  crop_params: CropParams | None = None,
                  enc_params: EncodingParams | None = None,
                  seed: int = 0) -> Prediction:
    """Clicks to full-image mask: smallest enclosing circle of the clicks,
    expanded square crop, model input assembly, prediction, binarization,
    paste back. Deterministic whenever the predictor is."""
    crop_params = crop_params or CropParams()
    enc_params = enc_params or EncodingParams()
    if len(clicks) < 2:
        raise TooFewClicks(f"pipeline needs >= 2 clicks, got {len(clicks)}")

    arr = np.asarray(image)
    h, w = arr.shape[0], arr.shape[1]
    circle = smallest_enclosing_circle(clicks.points(), seed=seed)
    crop = expand_to_crop(circle, crop_params, (w, h))
    model_input = assemble_input(arr, crop, clicks, crop_params, enc_params)
    probs = np.asarray(predictor.predict(model_input), dtype=float)
    if probs.shape != (model_input.size, model_input.size):
        raise ShapeMismatch(
            f"predictor output {probs.shape} vs input size {model_input.size}")
    mask_crop = binarize(probs, enc_params.binarize_threshold)
    mask_full = paste_mask(mask_crop, crop, (w, h))
    return Prediction(probs=probs, mask_full=mask_full, crop=crop)
