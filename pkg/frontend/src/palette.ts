// Palette: action types grouped by category plus library modules from
// the service. Drops create draft nodes locally; the debounced validate
// round-trip paints badges right after.

import { ACTIONS } from "./registry";
import { nodeStyle } from "./style";

export interface PaletteEntry {
  kind: "action" | "module";
  name: string;
  color: string;
}

export function paletteEntries(moduleNames: string[]): PaletteEntry[] {
  const entries: PaletteEntry[] = ACTIONS.map((action) => ({
    kind: "action",
    name: action.name,
    color: nodeStyle(action.category === "Condition" ? "Condition" : "Maneuver",
                     action.category).fill,
  }));
  for (const name of moduleNames) {
    entries.push({ kind: "module", name, color: nodeStyle("ModuleInstance").fill });
  }
  return entries;
}

export function renderPalette(container: HTMLElement, moduleNames: string[],
                              onDrop: (entry: PaletteEntry) => void): void {
  container.innerHTML = "";
  const groups: Array<[string, PaletteEntry[]]> = [];
  const entries = paletteEntries(moduleNames);
  const byKind = (kind: string, label: string) => {
    const chunk = entries.filter((entry) =>
      kind === "module" ? entry.kind === "module" : entry.kind === "action"
        && ACTIONS.find((a) => a.name === entry.name)?.category === kind);
    if (chunk.length) groups.push([label, chunk]);
  };
  byKind("Longitudinal", "Longitudinal");
  byKind("Lateral", "Lateral");
  byKind("Condition", "Conditions");
  byKind("module", "Library modules");

  for (const [label, chunk] of groups) {
    const heading = document.createElement("h3");
    heading.textContent = label;
    container.appendChild(heading);
    for (const entry of chunk) {
      const item = document.createElement("div");
      item.className = "palette-item";
      item.style.background = entry.color;
      item.textContent = entry.name;
      item.title = `Add ${entry.name} to the scenario`;
      item.addEventListener("click", () => onDrop(entry));
      container.appendChild(item);
    }
  }
}
