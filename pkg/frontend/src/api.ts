// Typed client for the covbridge gateway endpoints.
//
// Payload shapes mirror the server exactly; the client never aggregates or
// rounds — display fidelity is the UI's core contract.

export interface ElementInfo {
  element_id: number;
  bas_id: string;
  room_id: string;
}

export interface SummaryInfo {
  metric: string;
  granularity: string;
  rows: number;
}

export interface FrameEntry {
  element_id: number;
  bas_id: string;
  room_id: string;
  point_id: string;
  value: number;
  is_sentinel: boolean;
}

export interface FramePayload {
  metric: string;
  granularity: string;
  offset: number;
  period_start: string;
  entries: FrameEntry[];
}

export type FetchFn = (url: string) => Promise<Response>;

export class GatewayError extends Error {
  status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

export class GatewayClient {
  private baseUrl: string;
  private fetchFn: FetchFn;

  constructor(baseUrl: string, fetchFn: FetchFn = (url) => fetch(url)) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  async elements(): Promise<ElementInfo[]> {
    return this.getJson("/elements");
  }

  async summaries(): Promise<SummaryInfo[]> {
    return this.getJson("/summaries");
  }

  async frame(metric: string, granularity: string, offset: number): Promise<FramePayload> {
    const query = `metric=${encodeURIComponent(metric)}` +
      `&granularity=${encodeURIComponent(granularity)}&offset=${offset}`;
    return this.getJson(`/frame?${query}`);
  }

  private async getJson<T>(path: string): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path);
    if (!resp.ok) {
      throw new GatewayError(resp.status, `${path} -> HTTP ${resp.status}`);
    }
    return resp.json() as Promise<T>;
  }
}

// At most one frame request is "live" at a time: responses that arrive
// after a newer request started are dropped, so a rapid slider drag can
// never paint a stale period over the final one.
export class FrameFetcher {
  fetchCount = 0;
  private seq = 0;

  constructor(private client: GatewayClient) {}

  async fetch(metric: string, granularity: string, offset: number): Promise<FramePayload | null> {
    const ticket = ++this.seq;
    this.fetchCount += 1;
    const payload = await this.client.frame(metric, granularity, offset);
    return ticket === this.seq ? payload : null;
  }
}
