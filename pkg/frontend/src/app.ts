/**
 * DOM wiring: canvas rendering of image + mask overlay + crop outline +
 * click markers, file picker, undo/export buttons, error banner. All state
 * comes from the controller; this file only draws it.
 */

import { SessionApi, base64ToBytes } from "./api.js";
import { AnnotatorSession } from "./controller.js";
import { FitTransform, canvasToImage, fitTransform, imageToCanvas } from "./coords.js";
import { maskToOverlay, rgbaToMask } from "./overlay.js";
import { UiState, overlayVisible, undoEnabled } from "./state.js";

interface Elements {
  canvas: HTMLCanvasElement;
  file: HTMLInputElement;
  undoBtn: HTMLButtonElement;
  exportBtn: HTMLButtonElement;
  banner: HTMLElement;
  status: HTMLElement;
}

export class AnnotatorApp {
  private session: AnnotatorSession;
  private image: HTMLImageElement | null = null;
  private overlayCanvas: HTMLCanvasElement | null = null;
  private transform: FitTransform | null = null;
  private lastMaskB64: string | null = null;

  constructor(private el: Elements, baseUrl: string) {
    this.session = new AnnotatorSession(new SessionApi(baseUrl));
    this.session.onChange((s) => this.render(s));

    el.file.addEventListener("change", () => void this.openPicked());
    el.canvas.addEventListener("click", (ev) => void this.clickCanvas(ev));
    el.undoBtn.addEventListener("click", () => void this.session.undo());
    el.exportBtn.addEventListener("click", () => this.exportMask());
    window.addEventListener("resize", () => this.render(this.session.state));
  }

  private async openPicked(): Promise<void> {
    const file = this.el.file.files?.[0];
    if (!file) return;
    const bytes = new Uint8Array(await file.arrayBuffer());
    const image = await loadImage(bytes);
    try {
      await this.session.openImage(bytes, image.naturalWidth, image.naturalHeight);
      this.image = image;
    } catch {
      this.image = null; // banner already set by controller state
    }
    this.render(this.session.state);
  }

  private async clickCanvas(ev: MouseEvent): Promise<void> {
    if (!this.image || this.transform === null || this.session.state.busy) {
      return; // locked while a request is in flight, so order is preserved
    }
    const rect = this.el.canvas.getBoundingClientRect();
    const p = canvasToImage(this.transform, ev.clientX - rect.left,
                            ev.clientY - rect.top);
    await this.session.clickAt(p.x, p.y);
  }

  private exportMask(): void {
    const bytes = this.session.exportMask();
    if (bytes === null) return;
    const blob = new Blob([bytes.buffer as ArrayBuffer], { type: "image/png" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "mask.png";
    a.click();
    URL.revokeObjectURL(a.href);
  }

  private render(state: UiState): void {
    const { canvas, banner, status, undoBtn, exportBtn } = this.el;
    banner.textContent = state.error ?? "";
    banner.style.display = state.error ? "block" : "none";
    undoBtn.disabled = !undoEnabled(state);
    exportBtn.disabled = !overlayVisible(state);
    status.textContent = state.sessionId
      ? `${state.markers.length} click(s)${state.busy ? " — predicting…" : ""}`
      : "open an image to start";

    const ctx = canvas.getContext("2d");
    if (!ctx || !this.image) return;
    canvas.width = canvas.clientWidth;
    canvas.height = canvas.clientHeight;
    this.transform = fitTransform(state.imageW, state.imageH,
                                  canvas.width, canvas.height);
    const t = this.transform;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.drawImage(this.image, t.offsetX, t.offsetY,
                  state.imageW * t.scale, state.imageH * t.scale);

    if (state.maskB64 !== null) {
      if (state.maskB64 !== this.lastMaskB64) {
        this.lastMaskB64 = state.maskB64;
        void this.decodeOverlay(state.maskB64, state.imageW, state.imageH);
      }
      if (this.overlayCanvas) {
        ctx.imageSmoothingEnabled = false;
        ctx.drawImage(this.overlayCanvas, t.offsetX, t.offsetY,
                      state.imageW * t.scale, state.imageH * t.scale);
      }
    } else {
      this.overlayCanvas = null;
      this.lastMaskB64 = null;
    }

    if (state.crop !== null) {
      const a = imageToCanvas(t, state.crop.x0, state.crop.y0);
      ctx.strokeStyle = "rgba(255,80,80,0.9)";
      ctx.setLineDash([6, 4]);
      ctx.strokeRect(a.x, a.y, state.crop.w * t.scale, state.crop.h * t.scale);
      ctx.setLineDash([]);
    }

    for (const m of state.markers) {
      const p = imageToCanvas(t, m.x, m.y);
      ctx.fillStyle = "#27e02c";
      ctx.strokeStyle = "#064a08";
      ctx.beginPath();
      ctx.arc(p.x, p.y, 5, 0, 2 * Math.PI);
      ctx.fill();
      ctx.stroke();
    }
  }

  private async decodeOverlay(maskB64: string, w: number, h: number): Promise<void> {
    const img = await loadImage(base64ToBytes(maskB64));
    const work = document.createElement("canvas");
    work.width = w;
    work.height = h;
    const wctx = work.getContext("2d")!;
    wctx.drawImage(img, 0, 0);
    const data = wctx.getImageData(0, 0, w, h).data;
    const overlay = maskToOverlay(rgbaToMask(data, w, h), w, h);
    const pixels = new Uint8ClampedArray(new ArrayBuffer(overlay.length));
    pixels.set(overlay);
    wctx.putImageData(new ImageData(pixels, w, h), 0, 0);
    this.overlayCanvas = work;
    this.render(this.session.state);
  }
}

function loadImage(bytes: Uint8Array): Promise<HTMLImageElement> {
  return new Promise((resolve, reject) => {
    const url = URL.createObjectURL(
      new Blob([bytes.buffer as ArrayBuffer], { type: "image/png" }));
    const img = new Image();
    img.onload = () => {
      URL.revokeObjectURL(url);
      resolve(img);
    };
    img.onerror = () => {
      URL.revokeObjectURL(url);
      reject(new Error("cannot decode image"));
    };
    img.src = url;
  });
}
