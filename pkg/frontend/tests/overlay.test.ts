import { describe, expect, it } from "vitest";

import { OUTLINE, TINT, TINT_ALPHA, maskToOverlay, rgbaToMask } from "../src/overlay.js";

describe("mask overlay rendering", () => {
  it("tints interior at 45% alpha and outlines the contour", () => {
    // 5x5 solid square: border pixels outline, center tinted
    const mask = new Uint8Array(25).fill(1);
    const out = maskToOverlay(mask, 5, 5);
    const center = (2 * 5 + 2) * 4;
    expect([out[center], out[center + 1], out[center + 2]]).toEqual(TINT);
    expect(out[center + 3]).toBe(TINT_ALPHA);
    const corner = 0;
    expect([out[corner], out[corner + 1], out[corner + 2]]).toEqual(OUTLINE);
    expect(out[corner + 3]).toBe(255);
  });

  it("background stays fully transparent", () => {
    const mask = new Uint8Array(16); // all background
    const out = maskToOverlay(mask, 4, 4);
    expect(out.every((v) => v === 0)).toBe(true);
  });

  it("thresholds decoded RGBA back to a binary mask", () => {
    const rgba = new Uint8ClampedArray(8);
    rgba.set([255, 255, 255, 255, 0, 0, 0, 255]);
    expect(Array.from(rgbaToMask(rgba, 2, 1))).toEqual([1, 0]);
  });
});
