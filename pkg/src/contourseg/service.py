"""HTTP service for the interactive refinement loop: upload an image, add
contour clicks one by one, get the refined mask back after every click, undo,
and export.

Sessions are in-memory with an idle TTL. Mutations on one session are
serialized behind a per-session lock; different sessions run concurrently.
Per-click responses are kept on an undo stack, so undo restores the previous
response bit-exactly even for non-deterministic external predictors.
"""

from __future__ import annotations

import base64
import io
import secrets
import threading
import time
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from PIL import Image

from .click_sim import ClickSet
from .errors import ContourSegError, PredictorTimeout, ProtocolError
from .geometry import CropParams
from .predictor import (BaselinePredictor, EncodingParams, ExternalPredictor,
                        full_pipeline)

DEFAULT_TTL = 1800.0
DEFAULT_MAX_PIXELS = 4096 * 4096


def resolve_predictor(spec: str):
    if spec == "baseline":
        return BaselinePredictor()
    if spec.startswith("external:"):
        return ExternalPredictor(spec.split(":", 1)[1])
    raise ValueError(f"unknown predictor spec {spec!r} "
                     "(expected 'baseline' or 'external:URL')")


def _mask_png_b64(mask: np.ndarray) -> str:
    buf = io.BytesIO()
    Image.fromarray(mask.astype(np.uint8) * 255, mode="L").save(buf, format="PNG")
    return base64.b64encode(buf.getvalue()).decode("ascii")


@dataclass
class Session:
    session_id: str
    image: np.ndarray              # (H, W, 3) uint8
    predictor: object
    created_at: float
    last_active: float
    clicks: ClickSet = field(default_factory=ClickSet)
    history: list[dict] = field(default_factory=list)  # response per click
    lock: threading.Lock = field(default_factory=threading.Lock)

    def snapshot(self) -> dict:
        if self.history:
            return dict(self.history[-1])
        return {"clicks": 0, "mask": None, "crop": None}


class SessionStore:
    def __init__(self, ttl: float = DEFAULT_TTL, time_fn=time.monotonic):
        self.ttl = ttl
        self.time_fn = time_fn
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}

    def create(self, image: np.ndarray, predictor) -> Session:
        now = self.time_fn()
        session = Session(session_id=secrets.token_urlsafe(16), image=image,
                          predictor=predictor, created_at=now, last_active=now)
        with self._lock:
            self._sweep(now)
            self._sessions[session.session_id] = session
        return session

    def get(self, session_id: str) -> Session:
        now = self.time_fn()
        with self._lock:
            session = self._sessions.get(session_id)
            if session is not None and now - session.last_active > self.ttl:
                del self._sessions[session_id]
                session = None
            if session is None:
                raise HTTPException(404, "unknown or expired session")
            session.last_active = now
            return session

    def delete(self, session_id: str) -> None:
        with self._lock:
            if session_id not in self._sessions:
                raise HTTPException(404, "unknown or expired session")
            del self._sessions[session_id]

    def _sweep(self, now: float) -> None:
        dead = [k for k, s in self._sessions.items()
                if now - s.last_active > self.ttl]
        for k in dead:
            del self._sessions[k]


class PredictionGate:
    """Caps concurrent external-predictor calls; requests beyond the queue
    capacity are rejected with 503 instead of piling up."""

    def __init__(self, max_concurrent: int = 4, queue_capacity: int = 8):
        self._sem = threading.Semaphore(max_concurrent)
        self._slots = threading.BoundedSemaphore(max_concurrent + queue_capacity)

    def __enter__(self):
        if not self._slots.acquire(blocking=False):
            raise HTTPException(503, "prediction queue full")
        self._sem.acquire()
        return self

    def __exit__(self, *exc):
        self._sem.release()
        self._slots.release()
        return False


def create_app(predictor_spec: str = "baseline", session_ttl: float = DEFAULT_TTL,
               max_image_pixels: int = DEFAULT_MAX_PIXELS,
               cors_origins=("*",), max_concurrent_predictions: int = 4,
               crop_params: CropParams | None = None,
               enc_params: EncodingParams | None = None,
               time_fn=time.monotonic) -> FastAPI:
    app = FastAPI(title="contourseg session service")
    app.add_middleware(CORSMiddleware, allow_origins=list(cors_origins),
                       allow_methods=["*"], allow_headers=["*"])

    store = SessionStore(ttl=session_ttl, time_fn=time_fn)
    gate = PredictionGate(max_concurrent=max_concurrent_predictions)
    default_predictor = resolve_predictor(predictor_spec)
    crop_params = crop_params or CropParams()
    enc_params = enc_params or EncodingParams()
    app.state.store = store

    def decode_image(data: bytes) -> np.ndarray:
        try:
            with Image.open(io.BytesIO(data)) as im:
                im.load()
                rgb = im.convert("RGB")
        except Exception as e:
            raise HTTPException(400, f"cannot decode image: {e}")
        if rgb.width * rgb.height > max_image_pixels:
            raise HTTPException(413, f"image {rgb.width}x{rgb.height} exceeds "
                                     f"{max_image_pixels} pixels")
        return np.asarray(rgb)

    def run_prediction(session: Session) -> dict:
        h, w = session.image.shape[:2]
        external = isinstance(session.predictor, ExternalPredictor)
        try:
            if external:
                with gate:
                    pred = full_pipeline(session.image, session.clicks,
                                         session.predictor, crop_params, enc_params)
            else:
                pred = full_pipeline(session.image, session.clicks,
                                     session.predictor, crop_params, enc_params)
        except (PredictorTimeout, ProtocolError) as e:
            raise HTTPException(502, f"predictor failed: {e}")
        except ContourSegError as e:
            raise HTTPException(500, f"pipeline failed: {e}")
        return {
            "clicks": len(session.clicks),
            "mask": _mask_png_b64(pred.mask_full),
            "crop": {"x0": pred.crop.x0, "y0": pred.crop.y0,
                     "w": pred.crop.side_w, "h": pred.crop.side_h},
        }

    @app.post("/sessions")
    async def create_session(request: Request):
        content_type = request.headers.get("content-type", "")
        predictor = default_predictor
        if content_type.startswith("multipart/"):
            form = await request.form()
            upload = form.get("image")
            if upload is None:
                raise HTTPException(400, "missing 'image' file field")
            data = await upload.read()
            if form.get("predictor"):
                predictor = resolve_predictor(str(form["predictor"]))
        else:
            try:
                payload = await request.json()
            except Exception:
                raise HTTPException(400, "expected multipart or JSON body")
            if not isinstance(payload, dict) or "image" not in payload:
                raise HTTPException(400, "missing 'image' field")
            try:
                data = base64.b64decode(payload["image"], validate=True)
            except Exception as e:
                raise HTTPException(400, f"bad base64 image: {e}")
            if payload.get("predictor"):
                predictor = resolve_predictor(payload["predictor"])
        image = decode_image(data)
        session = store.create(image, predictor)
        return {"id": session.session_id}

    @app.post("/sessions/{session_id}/clicks")
    async def add_click(session_id: str, payload: dict):
        try:
            x = float(payload["x"])
            y = float(payload["y"])
        except (KeyError, TypeError, ValueError):
            raise HTTPException(422, "body must carry numeric 'x' and 'y'")
        session = store.get(session_id)
        with session.lock:
            h, w = session.image.shape[:2]
            if not (0 <= x < w and 0 <= y < h):
                raise HTTPException(422, f"click ({x}, {y}) outside {w}x{h} image")
            session.clicks.add(x, y, "human")
            if len(session.clicks) >= 2:
                try:
                    response = run_prediction(session)
                except HTTPException:
                    session.clicks.pop()  # state unchanged on failure
                    raise
            else:
                response = {"clicks": 1, "mask": None, "crop": None}
            session.history.append(response)
            return dict(response)

    @app.post("/sessions/{session_id}/undo")
    async def undo_click(session_id: str):
        session = store.get(session_id)
        with session.lock:
            if not len(session.clicks):
                raise HTTPException(409, "no click to undo")
            session.clicks.pop()
            session.history.pop()
            return session.snapshot()

    @app.get("/sessions/{session_id}")
    async def get_state(session_id: str):
        session = store.get(session_id)
        with session.lock:
            snap = session.snapshot()
            snap["click_list"] = [{"x": c.x, "y": c.y, "order": c.order,
                                   "source": c.source} for c in session.clicks]
            return snap

    @app.delete("/sessions/{session_id}")
    async def delete_session(session_id: str):
        store.delete(session_id)
        return {"deleted": True}

    return app
