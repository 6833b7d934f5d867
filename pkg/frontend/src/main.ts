import { App } from "./app";
import { loadConfig } from "./config";

async function boot(): Promise<void> {
  const config = await loadConfig();
  const app = new App(config, {
    grid: document.getElementById("grid")!,
    detail: document.getElementById("detail")!,
    banner: document.getElementById("banner")!,
    periodLabel: document.getElementById("period")!,
  });

  const slider = document.getElementById("slider") as HTMLInputElement;
  const metricSelect = document.getElementById("metric") as HTMLSelectElement;
  const granularitySelect = document.getElementById("granularity") as HTMLSelectElement;

  // The slider counts periods-ago, so dragging right goes back in time.
  slider.addEventListener("input", () => {
    const target = Number(slider.value);
    const delta = target - app.state.offset;
    if (delta !== 0) void app.step(delta > 0 ? 1 : -1);
  });
  const retable = () => {
    void app.setTable(metricSelect.value, granularitySelect.value).then(() => {
      slider.max = String(Math.max(app.state.rows - 1, 0));
      slider.value = String(app.state.offset);
    });
  };
  metricSelect.addEventListener("change", retable);
  granularitySelect.addEventListener("change", retable);

  await app.init();
  slider.max = String(Math.max(app.state.rows - 1, 0));
  slider.value = "0";
}

void boot();
