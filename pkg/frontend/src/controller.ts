/**
 * Annotator session controller: owns the UI state, serializes mutations
 * (clicks are queued while a request is in flight, never reordered), and is
 * completely DOM-free so the full loop can be driven headlessly.
 */

import { ApiError, SessionApi, base64ToBytes } from "./api.js";
import {
  UiState,
  emptyState,
  requestFailed,
  requestStarted,
  responseSettled,
  sessionOpened,
  undoEnabled,
} from "./state.js";

type Listener = (state: UiState) => void;

export class AnnotatorSession {
  state: UiState = emptyState();
  private queue: Promise<void> = Promise.resolve();
  private listeners: Listener[] = [];

  constructor(private api: SessionApi) {}

  onChange(fn: Listener): void {
    this.listeners.push(fn);
  }

  private setState(next: UiState): void {
    this.state = next;
    for (const fn of this.listeners) fn(next);
  }

  /** Serialize mutations: each enqueued task starts after the previous one
   * settled, so click order is exactly user order. */
  private enqueue(task: () => Promise<void>): Promise<void> {
    const run = this.queue.then(task);
    this.queue = run.catch(() => undefined);
    return run;
  }

  async openImage(png: Uint8Array, imageW: number, imageH: number,
                  predictor?: string): Promise<void> {
    this.setState(requestStarted(this.state));
    try {
      const id = await this.api.createSession(png, predictor);
      this.setState(sessionOpened(this.state, id, imageW, imageH));
    } catch (e) {
      this.setState(requestFailed(this.state, describe(e)));
      throw e;
    }
  }

  clickAt(x: number, y: number): Promise<void> {
    return this.enqueue(async () => {
      const id = this.state.sessionId;
      if (id === null) throw new Error("no open session");
      if (x < 0 || y < 0 || x >= this.state.imageW || y >= this.state.imageH) {
        return; // outside the image: ignore, no request
      }
      this.setState(requestStarted(this.state));
      try {
        const resp = await this.api.addClick(id, x, y);
        this.setState(responseSettled(this.state, resp, { x, y }));
      } catch (e) {
        // 422 and friends: flash the error, keep the previous state
        this.setState(requestFailed(this.state, describe(e)));
      }
    });
  }

  undo(): Promise<void> {
    return this.enqueue(async () => {
      const id = this.state.sessionId;
      if (id === null || !undoEnabled(this.state)) return;
      this.setState(requestStarted(this.state));
      try {
        const resp = await this.api.undo(id);
        this.setState(responseSettled(this.state, resp));
      } catch (e) {
        this.setState(requestFailed(this.state, describe(e)));
      }
    });
  }

  /** Current full-resolution mask exactly as served, or null. */
  exportMask(): Uint8Array | null {
    return this.state.maskB64 === null ? null : base64ToBytes(this.state.maskB64);
  }

  /** Re-fetch server state and rebuild the display state from it. */
  async refresh(): Promise<void> {
    const id = this.state.sessionId;
    if (id === null) return;
    const snap = await this.api.getState(id);
    const markers = snap.click_list.map((c) => ({ x: c.x, y: c.y, order: c.order }));
    this.setState({
      ...this.state,
      markers,
      maskB64: snap.mask,
      crop: snap.crop,
      busy: false,
      error: null,
    });
  }

  async settled(): Promise<void> {
    await this.queue;
  }
}

function describe(e: unknown): string {
  if (e instanceof ApiError) return `server ${e.status}: ${e.message}`;
  return e instanceof Error ? e.message : String(e);
}
