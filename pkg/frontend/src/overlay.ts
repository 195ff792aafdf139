/**
 * Mask overlay pixels: tint foreground at 45% alpha and draw a solid contour
 * outline for visibility. Operates on raw RGBA buffers so it stays
 * canvas-free and testable.
 */

export const TINT: [number, number, number] = [64, 156, 255];
export const TINT_ALPHA = Math.round(0.45 * 255);
export const OUTLINE: [number, number, number] = [255, 214, 0];

/** mask: length w*h, nonzero = foreground. Returns RGBA of the overlay. */
export function maskToOverlay(
  mask: Uint8Array | Uint8ClampedArray,
  w: number,
  h: number,
): Uint8ClampedArray {
  const out = new Uint8ClampedArray(w * h * 4);
  for (let y = 0; y < h; y++) {
    for (let x = 0; x < w; x++) {
      const i = y * w + x;
      if (!mask[i]) continue;
      const boundary =
        x === 0 || x === w - 1 || y === 0 || y === h - 1 ||
        !mask[i - 1] || !mask[i + 1] || !mask[i - w] || !mask[i + w];
      const o = i * 4;
      const [r, g, b] = boundary ? OUTLINE : TINT;
      out[o] = r;
      out[o + 1] = g;
      out[o + 2] = b;
      out[o + 3] = boundary ? 255 : TINT_ALPHA;
    }
  }
  return out;
}

/** Grayscale/alpha-agnostic threshold of decoded PNG RGBA data to a binary
 * mask (server masks are 0/255 single channel, expanded to RGBA on decode). */
export function rgbaToMask(data: Uint8ClampedArray, w: number, h: number): Uint8Array {
  const out = new Uint8Array(w * h);
  for (let i = 0; i < w * h; i++) {
    out[i] = data[i * 4] > 127 ? 1 : 0;
  }
  return out;
}
