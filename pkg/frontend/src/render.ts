import type { FrameEntry, FramePayload } from "./api";
import type { ViewState } from "./state";
import { colorFor } from "./colors";

// Rendering is string-faithful: a payload value of 23.3 is shown as
// "23.3", never re-rounded or re-aggregated on the client.
export function formatValue(value: number): string {
  return String(value);
}

function entriesByElement(payload: FramePayload): Map<number, FrameEntry[]> {
  const grouped = new Map<number, FrameEntry[]>();
  for (const entry of payload.entries) {
    const list = grouped.get(entry.element_id) ?? [];
    list.push(entry);
    grouped.set(entry.element_id, list);
  }
  return grouped;
}

/** Grid of element cells grouped by room; one chip per point inside a cell. */
export function renderFrame(root: HTMLElement, payload: FramePayload, state: ViewState): void {
  root.innerHTML = "";

  const byRoom = new Map<string, Map<number, FrameEntry[]>>();
  for (const [elementId, entries] of entriesByElement(payload)) {
    const room = entries[0].room_id || "(unassigned)";
    const roomMap = byRoom.get(room) ?? new Map<number, FrameEntry[]>();
    roomMap.set(elementId, entries);
    byRoom.set(room, roomMap);
  }

  for (const [room, elements] of byRoom) {
    const section = document.createElement("section");
    section.className = "room";
    section.dataset.room = room;

    const heading = document.createElement("h2");
    heading.textContent = room;
    section.appendChild(heading);

    for (const [elementId, entries] of elements) {
      const cell = document.createElement("div");
      cell.className = "element-cell";
      cell.dataset.elementId = String(elementId);

      const label = document.createElement("div");
      label.className = "element-label";
      label.textContent = `${entries[0].bas_id} · #${elementId}`;
      cell.appendChild(label);

      for (const entry of entries) {
        cell.appendChild(renderChip(entry, state));
      }
      cell.addEventListener("click", () => {
        root.dispatchEvent(new CustomEvent("element-selected", { detail: elementId, bubbles: true }));
      });
      section.appendChild(cell);
    }
    root.appendChild(section);
  }
}

function renderChip(entry: FrameEntry, state: ViewState): HTMLElement {
  const chip = document.createElement("span");
  chip.dataset.pointId = entry.point_id;
  if (entry.is_sentinel) {
    chip.className = "point-chip no-data";
    chip.textContent = `${entry.point_id}: no data`;
  } else {
    chip.className = "point-chip";
    chip.textContent = `${entry.point_id}: ${formatValue(entry.value)}`;
    const scale = state.colorScales[entry.point_id];
    if (scale) {
      chip.style.backgroundColor = colorFor(entry.value, scale);
    }
  }
  return chip;
}

/** Side panel listing every point of one element in the current frame. */
export function renderDetail(panel: HTMLElement, payload: FramePayload, elementId: number | null): void {
  panel.innerHTML = "";
  const entries = elementId === null
    ? []
    : payload.entries.filter((e) => e.element_id === elementId);
  if (entries.length === 0) {
    panel.hidden = true; // unknown or unselected element: panel stays closed
    return;
  }
  panel.hidden = false;

  const heading = document.createElement("h3");
  heading.textContent = `${entries[0].bas_id} — ${entries[0].room_id}`;
  panel.appendChild(heading);

  const list = document.createElement("dl");
  for (const entry of entries) {
    const dt = document.createElement("dt");
    dt.textContent = entry.point_id;
    const dd = document.createElement("dd");
    dd.dataset.pointId = entry.point_id;
    dd.textContent = entry.is_sentinel ? "no data" : formatValue(entry.value);
    list.appendChild(dt);
    list.appendChild(dd);
  }
  panel.appendChild(list);
}

export function renderErrorBanner(banner: HTMLElement, message: string | null): void {
  if (message === null) {
    banner.hidden = true;
    banner.textContent = "";
    return;
  }
  banner.hidden = false;
  banner.textContent = `${message} — `;
  const retry = document.createElement("button");
  retry.textContent = "retry";
  retry.addEventListener("click", () => {
    banner.dispatchEvent(new CustomEvent("retry-requested", { bubbles: true }));
  });
  banner.appendChild(retry);
}
