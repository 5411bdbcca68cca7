// Editor document state. Scenario edits go through these helpers so the
// split stays honest: parameter and structure edits touch the document,
// canvas geometry only ever touches the layout sidecar.

import type {
  NodeRecord,
  ParamValueJson,
  ScenarioDocument,
  ValidationReport,
} from "./types";
import { actionMeta } from "./registry";

export interface EditorState {
  sessionId: string | null;
  revision: number;
  document: ScenarioDocument;
  dirty: boolean;
  selection: string | null;
  report: ValidationReport | null;
}

export function initialState(doc: ScenarioDocument): EditorState {
  return {
    sessionId: null,
    revision: 0,
    document: doc,
    dirty: false,
    selection: null,
    report: null,
  };
}

export function findNode(doc: ScenarioDocument, nodeId: string): NodeRecord | undefined {
  return doc.nodes.find((node) => node.id === nodeId);
}

export function setParam(state: EditorState, nodeId: string, key: string,
                         value: ParamValueJson): void {
  const node = findNode(state.document, nodeId);
  if (!node || !node.params) throw new Error(`node ${nodeId} carries no parameters`);
  node.params[key] = value;
  state.dirty = true;
}

export function renameNode(state: EditorState, nodeId: string, newId: string): void {
  if (findNode(state.document, newId)) throw new Error(`id ${newId} already in use`);
  const node = findNode(state.document, nodeId);
  if (!node) throw new Error(`no node ${nodeId}`);
  node.id = newId;
  for (const edge of state.document.edges) {
    if (edge.from === nodeId) edge.from = newId;
    if (edge.to === nodeId) edge.to = newId;
  }
  state.dirty = true;
}

let dropCounter = 0;

/** Fresh node id for palette drops, unique within the document. */
export function freshNodeId(doc: ScenarioDocument, prefix: string): string {
  for (;;) {
    dropCounter += 1;
    const candidate = `${prefix}_${dropCounter}`;
    if (!findNode(doc, candidate)) return candidate;
  }
}

export function addActionNode(state: EditorState, actionType: string,
                              refActor: string, targetActor?: string): NodeRecord {
  const meta = actionMeta(actionType);
  if (!meta) throw new Error(`unknown action ${actionType}`);
  const params: Record<string, ParamValueJson> = {};
  for (const spec of meta.params) params[spec.name] = null;
  const node: NodeRecord = {
    id: freshNodeId(state.document, actionType.toLowerCase()),
    kind: meta.category === "Condition" ? "Condition" : "Maneuver",
    action_type: actionType,
    category: meta.category,
    ref_actor: refActor,
    target_actor: meta.twoActor ? (targetActor ?? null) : null,
    params,
  };
  state.document.nodes.push(node);
  state.dirty = true;
  return node;
}

export function addModuleInstance(state: EditorState, moduleName: string,
                                  bindings: Record<string, string>): NodeRecord {
  const node: NodeRecord = {
    id: freshNodeId(state.document, moduleName.toLowerCase()),
    kind: "ModuleInstance",
    module: moduleName,
    bindings,
    overrides: {},
  };
  state.document.nodes.push(node);
  state.dirty = true;
  return node;
}

export function connectNodes(state: EditorState, from: string, to: string,
                             fromPort?: string, toPort?: string): void {
  if (from === to) throw new Error("self-loops are not allowed");
  const exists = state.document.edges.some(
    (edge) => edge.from === from && edge.to === to
      && edge.from_port === fromPort && edge.to_port === toPort,
  );
  if (exists) throw new Error("edge already exists");
  const edge: { from: string; to: string; from_port?: string; to_port?: string } = { from, to };
  if (fromPort !== undefined) edge.from_port = fromPort;
  if (toPort !== undefined) edge.to_port = toPort;
  state.document.edges.push(edge);
  state.dirty = true;
}

/** Body for PUT /scenarios/{id}; the document goes up exactly as held. */
export function savePayload(state: EditorState): { revision: number; scenario: ScenarioDocument } {
  return { revision: state.revision, scenario: state.document };
}
