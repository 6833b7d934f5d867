// In-memory gateway serving the three-AHU sample deployment used across
// the backend tests: same registry, point order, and hourly-average rows.

import type { ElementInfo, FetchFn, FrameEntry, FramePayload } from "../src/api";

export const SENTINEL = 555555;

export const ELEMENTS: ElementInfo[] = [
  { element_id: 38526, bas_id: "AHU1", room_id: "RM-101" },
  { element_id: 31429, bas_id: "AHU2", room_id: "RM-102" },
  { element_id: 43512, bas_id: "AHU3", room_id: "RM-103" },
];

export const POINT_ORDER = ["SAH", "SAT"];

// [period_start, values per bas_id in POINT_ORDER], newest first
export const ROWS: Array<[string, Record<string, number[]>]> = [
  ["2019-05-24 17:00:00", {
    AHU1: [0.23, 22.3], AHU2: [0.7, 22.0], AHU3: [SENTINEL, SENTINEL],
  }],
  ["2019-05-24 16:00:00", {
    AHU1: [0.5, 23.3], AHU2: [0.8, 25.5], AHU3: [SENTINEL, SENTINEL],
  }],
  ["2019-05-24 15:00:00", {
    AHU1: [0.22, 23.8], AHU2: [1.1, 22.0], AHU3: [SENTINEL, SENTINEL],
  }],
];

export function framePayload(metric: string, granularity: string, offset: number): FramePayload {
  const [periodStart, values] = ROWS[offset];
  const entries: FrameEntry[] = [];
  for (let k = 0; k < POINT_ORDER.length; k++) {
    for (const element of ELEMENTS) {
      const value = values[element.bas_id][k];
      entries.push({
        element_id: element.element_id,
        bas_id: element.bas_id,
        room_id: element.room_id,
        point_id: POINT_ORDER[k],
        value,
        is_sentinel: value === SENTINEL,
      });
    }
  }
  return { metric, granularity, offset, period_start: periodStart, entries };
}

export interface StubGateway {
  fetchFn: FetchFn;
  requests: string[];
}

/** fetch() implementing the gateway contract over the fixture data. */
export function stubGateway(): StubGateway {
  const requests: string[] = [];

  const json = (body: unknown, status = 200) =>
    new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });

  const fetchFn: FetchFn = async (url) => {
    requests.push(url);
    const parsed = new URL(url, "http://stub");
    switch (parsed.pathname) {
      case "/health":
        return new Response("ok");
      case "/elements":
        return json(ELEMENTS);
      case "/summaries":
        return json([{ metric: "avg", granularity: "hourly", rows: ROWS.length }]);
      case "/frame": {
        const metric = parsed.searchParams.get("metric") ?? "";
        const granularity = parsed.searchParams.get("granularity") ?? "";
        const offset = Number(parsed.searchParams.get("offset") ?? "0");
        if (metric !== "avg" || granularity !== "hourly") {
          return json({ detail: "no such summary" }, 404);
        }
        if (offset < 0 || offset >= ROWS.length) {
          return json({ detail: "offset out of range" }, 416);
        }
        return json(framePayload(metric, granularity, offset));
      }
      default:
        return json({ detail: "not found" }, 404);
    }
  };

  return { fetchFn, requests };
}
