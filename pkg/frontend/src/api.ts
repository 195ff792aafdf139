/**
 * Typed client for the contourseg session service.
 *
 * All methods reject with ApiError carrying the HTTP status and the server's
 * detail message, so the UI can surface 4xx responses verbatim.
 */

export interface CropRect {
  x0: number;
  y0: number;
  w: number;
  h: number;
}

export interface ClickResponse {
  clicks: number;
  mask: string | null; // base64 PNG, full image size
  crop: CropRect | null;
}

export interface ClickEntry {
  x: number;
  y: number;
  order: number;
  source: string;
}

export interface StateResponse extends ClickResponse {
  click_list: ClickEntry[];
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
  }
}

async function parseOrThrow<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail = `HTTP ${resp.status}`;
    try {
      const body = await resp.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // non-JSON error body; keep the status line
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

function toBase64(bytes: Uint8Array): string {
  let bin = "";
  const chunk = 0x8000;
  for (let i = 0; i < bytes.length; i += chunk) {
    bin += String.fromCharCode(...bytes.subarray(i, i + chunk));
  }
  return btoa(bin);
}

export function base64ToBytes(b64: string): Uint8Array {
  const bin = atob(b64);
  const out = new Uint8Array(bin.length);
  for (let i = 0; i < bin.length; i++) out[i] = bin.charCodeAt(i);
  return out;
}

export class SessionApi {
  constructor(readonly baseUrl: string, private fetchFn: typeof fetch = fetch) {}

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, "")}${path}`;
  }

  async createSession(imagePng: Uint8Array, predictor?: string): Promise<string> {
    const body: Record<string, string> = { image: toBase64(imagePng) };
    if (predictor) body.predictor = predictor;
    const resp = await this.fetchFn(this.url("/sessions"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    const data = await parseOrThrow<{ id: string }>(resp);
    return data.id;
  }

  async addClick(id: string, x: number, y: number): Promise<ClickResponse> {
    const resp = await this.fetchFn(this.url(`/sessions/${id}/clicks`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ x, y }),
    });
    return parseOrThrow<ClickResponse>(resp);
  }

  async undo(id: string): Promise<ClickResponse> {
    const resp = await this.fetchFn(this.url(`/sessions/${id}/undo`), {
      method: "POST",
    });
    return parseOrThrow<ClickResponse>(resp);
  }

  async getState(id: string): Promise<StateResponse> {
    const resp = await this.fetchFn(this.url(`/sessions/${id}`));
    return parseOrThrow<StateResponse>(resp);
  }

  async deleteSession(id: string): Promise<void> {
    const resp = await this.fetchFn(this.url(`/sessions/${id}`), {
      method: "DELETE",
    });
    await parseOrThrow<unknown>(resp);
  }
}
