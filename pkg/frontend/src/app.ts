import { FrameFetcher, GatewayClient, type FramePayload, type SummaryInfo } from "./api";
import { clampOffset, stepOffset, type ViewState } from "./state";
import { renderDetail, renderErrorBanner, renderFrame } from "./render";
import type { UiConfig } from "./config";

export interface AppElements {
  grid: HTMLElement;
  detail: HTMLElement;
  banner: HTMLElement;
  periodLabel: HTMLElement;
}

/**
 * Controller gluing state, gateway client, and DOM together.
 *
 * Invariants enforced here: one fetch per slider step (clamped steps fetch
 * nothing), stale responses never painted, and a failed fetch keeps the
 * last good frame on screen behind a retry banner.
 */
export class App {
  state: ViewState;
  lastFrame: FramePayload | null = null;
  private client: GatewayClient;
  private fetcher: FrameFetcher;
  private catalog: SummaryInfo[] = [];

  constructor(config: UiConfig, private dom: AppElements,
              fetchFn?: ConstructorParameters<typeof GatewayClient>[1]) {
    this.client = new GatewayClient(config.apiBase, fetchFn);
    this.fetcher = new FrameFetcher(this.client);
    this.state = {
      metric: "avg",
      granularity: "hourly",
      offset: 0,
      rows: 0,
      selectedElement: null,
      colorScales: config.colorScales,
    };
    dom.grid.addEventListener("element-selected", (ev) => {
      this.selectElement((ev as CustomEvent<number>).detail);
    });
    dom.banner.addEventListener("retry-requested", () => {
      void this.refresh();
    });
  }

  get fetchCount(): number {
    return this.fetcher.fetchCount;
  }

  async init(): Promise<void> {
    this.catalog = await this.client.summaries();
    this.syncRows();
    await this.refresh();
  }

  async setTable(metric: string, granularity: string): Promise<void> {
    this.state.metric = metric;
    this.state.granularity = granularity;
    this.syncRows();
    this.state.offset = clampOffset(this.state.offset, this.state.rows);
    await this.refresh();
  }

  /** One slider step; clamped steps are free (no network traffic). */
  async step(delta: number): Promise<void> {
    const next = stepOffset(this.state, delta);
    if (next === null) return;
    this.state.offset = next;
    await this.refresh();
  }

  selectElement(elementId: number | null): void {
    this.state.selectedElement = elementId;
    if (this.lastFrame) {
      renderDetail(this.dom.detail, this.lastFrame, elementId);
    }
  }

  async refresh(): Promise<void> {
    let payload: FramePayload | null;
    try {
      payload = await this.fetcher.fetch(
        this.state.metric, this.state.granularity, this.state.offset);
    } catch (err) {
      renderErrorBanner(this.dom.banner, `frame fetch failed: ${(err as Error).message}`);
      return; // last frame stays on screen
    }
    if (payload === null) return; // superseded by a newer request
    this.lastFrame = payload;
    renderErrorBanner(this.dom.banner, null);
    this.dom.periodLabel.textContent = payload.period_start;
    renderFrame(this.dom.grid, payload, this.state);
    renderDetail(this.dom.detail, payload, this.state.selectedElement);
  }

  private syncRows(): void {
    const info = this.catalog.find(
      (s) => s.metric === this.state.metric && s.granularity === this.state.granularity);
    this.state.rows = info ? info.rows : 0;
  }
}
