// Canvas positions live in a sidecar keyed by node id, never inside the
// scenario document, so saving an edited layout leaves the scenario file
// untouched byte for byte.

import type { ScenarioDocument } from "./types";

export interface LayoutSidecar {
  scenario: string;
  positions: Record<string, { x: number; y: number }>;
  collapsed: Record<string, boolean>;
}

export function emptySidecar(scenarioName: string): LayoutSidecar {
  return { scenario: scenarioName, positions: {}, collapsed: {} };
}

const COLUMN_WIDTH = 190;
const ROW_HEIGHT = 92;
const MARGIN_X = 60;
const MARGIN_Y = 60;

/** Depth of each node measured as the longest path from the root. */
export function nodeDepths(doc: ScenarioDocument): Record<string, number> {
  const depths: Record<string, number> = {};
  for (const node of doc.nodes) depths[node.id] = 0;
  // relax longest-path over the DAG; bounded by node count for safety
  for (let pass = 0; pass < doc.nodes.length; pass += 1) {
    let changed = false;
    for (const edge of doc.edges) {
      const from = depths[edge.from];
      const to = depths[edge.to];
      if (from === undefined || to === undefined) continue;
      if (from + 1 > to) {
        depths[edge.to] = from + 1;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return depths;
}

/** Left-to-right layered layout; deterministic for a given document. */
export function autoLayout(doc: ScenarioDocument): LayoutSidecar {
  const sidecar = emptySidecar(doc.name);
  const depths = nodeDepths(doc);
  const lanes: Record<number, number> = {};
  for (const node of doc.nodes) {
    const depth = depths[node.id] ?? 0;
    const lane = lanes[depth] ?? 0;
    lanes[depth] = lane + 1;
    sidecar.positions[node.id] = {
      x: MARGIN_X + depth * COLUMN_WIDTH,
      y: MARGIN_Y + lane * ROW_HEIGHT,
    };
  }
  return sidecar;
}

export function moveNode(sidecar: LayoutSidecar, nodeId: string, x: number, y: number): void {
  sidecar.positions[nodeId] = { x, y };
}

export function toggleCollapsed(sidecar: LayoutSidecar, nodeId: string): boolean {
  const next = !(sidecar.collapsed[nodeId] ?? true);
  sidecar.collapsed[nodeId] = next;
  return next;
}

const STORAGE_PREFIX = "scenograph.layout.";

export function loadSidecar(storage: Pick<Storage, "getItem">, scenarioId: string,
                            doc: ScenarioDocument): LayoutSidecar {
  const raw = storage.getItem(STORAGE_PREFIX + scenarioId);
  if (!raw) return autoLayout(doc);
  try {
    const parsed = JSON.parse(raw) as LayoutSidecar;
    // nodes added since the sidecar was written get auto positions
    const fallback = autoLayout(doc);
    for (const node of doc.nodes) {
      if (!parsed.positions[node.id]) {
        parsed.positions[node.id] = fallback.positions[node.id]!;
      }
    }
    return parsed;
  } catch {
    return autoLayout(doc);
  }
}

export function saveSidecar(storage: Pick<Storage, "setItem">, scenarioId: string,
                            sidecar: LayoutSidecar): void {
  storage.setItem(STORAGE_PREFIX + scenarioId, JSON.stringify(sidecar));
}
