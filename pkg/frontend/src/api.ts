/** Client for the visualization service.
 *
 * At most one request is in flight: starting a new one aborts the
 * previous, so a slow older response can never overwrite a newer one.
 */
import type { VisualizeRequest, VisualizeResponse } from "./types.js";

export class ServiceError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
    this.name = "ServiceError";
  }
}

export function isAbort(err: unknown): boolean {
  return err instanceof DOMException && err.name === "AbortError";
}

export class VisualizeClient {
  private controller: AbortController | null = null;

  constructor(private readonly baseUrl: string = "",
              private readonly fetchFn: typeof fetch =
                globalThis.fetch.bind(globalThis)) {}

  /** POST the raw editor text; resolves with the parsed response.
   * Rejects with an AbortError DOMException when superseded. */
  async visualize(req: VisualizeRequest): Promise<VisualizeResponse> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    let resp: Response;
    try {
      resp = await this.fetchFn(this.baseUrl + "/api/visualize", {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(req),
        signal: controller.signal,
      });
    } catch (err) {
      if (isAbort(err)) throw err;
      throw new ServiceError(
        err instanceof Error ? err.message : String(err));
    }
    if (!resp.ok) {
      throw new ServiceError(`service answered ${resp.status}`, resp.status);
    }
    return await resp.json() as VisualizeResponse;
  }

  cancel(): void {
    this.controller?.abort();
    this.controller = null;
  }
}
