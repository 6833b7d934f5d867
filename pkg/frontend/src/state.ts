// View state and slider arithmetic. Offsets count periods-ago: 0 is the
// newest row of the active summary table.

export interface ScaleRange {
  min: number;
  max: number;
}

export type ColorScales = Record<string, ScaleRange>;

export interface ViewState {
  metric: string;
  granularity: string;
  offset: number;
  rows: number; // row count of the active summary, from /summaries
  selectedElement: number | null;
  colorScales: ColorScales;
}

export function clampOffset(offset: number, rows: number): number {
  if (rows <= 0) return 0;
  return Math.min(Math.max(offset, 0), rows - 1);
}

/**
 * Apply a slider step. Returns the new offset, or null when the step is
 * clamped into the current position — the caller must not fetch then.
 */
export function stepOffset(state: ViewState, delta: number): number | null {
  const next = clampOffset(state.offset + delta, state.rows);
  return next === state.offset ? null : next;
}
