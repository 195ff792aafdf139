/**
 * Canvas <-> image coordinate mapping. The image is drawn fit-to-viewport
 * (contain), centered; markers must land within one CSS pixel of the cursor
 * at any zoom, so both directions share a single affine transform.
 */

export interface FitTransform {
  scale: number;
  offsetX: number;
  offsetY: number;
}

export function fitTransform(
  imageW: number,
  imageH: number,
  viewW: number,
  viewH: number,
): FitTransform {
  const scale = Math.min(viewW / imageW, viewH / imageH);
  return {
    scale,
    offsetX: (viewW - imageW * scale) / 2,
    offsetY: (viewH - imageH * scale) / 2,
  };
}

export function canvasToImage(
  t: FitTransform,
  cx: number,
  cy: number,
): { x: number; y: number } {
  return { x: (cx - t.offsetX) / t.scale, y: (cy - t.offsetY) / t.scale };
}

export function imageToCanvas(
  t: FitTransform,
  ix: number,
  iy: number,
): { x: number; y: number } {
  return { x: ix * t.scale + t.offsetX, y: iy * t.scale + t.offsetY };
}

export function insideImage(
  imageW: number,
  imageH: number,
  p: { x: number; y: number },
): boolean {
  return p.x >= 0 && p.y >= 0 && p.x < imageW && p.y < imageH;
}
