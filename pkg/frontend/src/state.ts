/**
 * UI session state: a pure function of the last settled server response plus
 * the in-flight flag. Rendering reads this and nothing else, so re-fetching
 * GET state always reproduces the display.
 */

import { ClickResponse, CropRect } from "./api.js";

export interface Marker {
  x: number;
  y: number;
  order: number;
}

export interface UiState {
  sessionId: string | null;
  imageW: number;
  imageH: number;
  markers: Marker[];
  maskB64: string | null;
  crop: CropRect | null;
  busy: boolean;
  error: string | null;
}

export function emptyState(): UiState {
  return {
    sessionId: null,
    imageW: 0,
    imageH: 0,
    markers: [],
    maskB64: null,
    crop: null,
    busy: false,
    error: null,
  };
}

export function sessionOpened(
  state: UiState,
  sessionId: string,
  imageW: number,
  imageH: number,
): UiState {
  return { ...emptyState(), sessionId, imageW, imageH };
}

/** Apply a settled click/undo response. Marker list mirrors the server count:
 * a click appends the point we sent; an undo truncates. */
export function responseSettled(
  state: UiState,
  response: ClickResponse,
  clicked?: { x: number; y: number },
): UiState {
  let markers = state.markers;
  if (clicked !== undefined && response.clicks === state.markers.length + 1) {
    markers = [...markers, { ...clicked, order: response.clicks }];
  } else if (response.clicks < markers.length) {
    markers = markers.slice(0, response.clicks);
  }
  return {
    ...state,
    markers,
    maskB64: response.mask,
    crop: response.crop,
    busy: false,
    error: null,
  };
}

export function requestStarted(state: UiState): UiState {
  return { ...state, busy: true };
}

export function requestFailed(state: UiState, message: string): UiState {
  return { ...state, busy: false, error: message };
}

export function overlayVisible(state: UiState): boolean {
  return state.maskB64 !== null;
}

export function undoEnabled(state: UiState): boolean {
  return state.markers.length > 0 && !state.busy;
}
