import type { ScaleRange } from "./state";

// Linear two-stop ramp, blue (cold) to red (hot). Values outside the
// configured range clamp to the endpoints; equal values always get equal
// colors. Sentinels never reach this code — they render as "no data".

const LOW = [43, 108, 176]; // #2b6cb0
const HIGH = [197, 48, 48]; // #c53030

export function colorFor(value: number, scale: ScaleRange): string {
  const span = scale.max - scale.min;
  const t = span > 0 ? Math.min(Math.max((value - scale.min) / span, 0), 1) : 0;
  const channel = (i: number) => Math.round(LOW[i] + t * (HIGH[i] - LOW[i]));
  return `rgb(${channel(0)}, ${channel(1)}, ${channel(2)})`;
}
