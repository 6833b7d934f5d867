import type { ColorScales } from "./state";
import type { FetchFn } from "./api";

export interface UiConfig {
  apiBase: string;
  colorScales: ColorScales;
}

export const defaultConfig: UiConfig = {
  apiBase: "http://127.0.0.1:8000",
  colorScales: {
    SAT: { min: 15, max: 30 }, // supply air temperature, degC
    SAH: { min: 0, max: 1.5 }, // supply air humidity ratio
    OCC: { min: 0, max: 1 },
    T: { min: 15, max: 30 },
  },
};

/** Merge overrides from config.json next to the bundle, if present. */
export async function loadConfig(fetchFn: FetchFn = (url) => fetch(url)): Promise<UiConfig> {
  try {
    const resp = await fetchFn("config.json");
    if (!resp.ok) return defaultConfig;
    const overrides = (await resp.json()) as Partial<UiConfig>;
    return {
      apiBase: overrides.apiBase ?? defaultConfig.apiBase,
      colorScales: { ...defaultConfig.colorScales, ...(overrides.colorScales ?? {}) },
    };
  } catch {
    return defaultConfig;
  }
}
