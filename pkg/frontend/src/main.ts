// Editor bootstrap: wires the canvas, palette, property panel, validation
// badges, and trace playback to the scenograph service.

import { ApiClient, StaleRevision } from "./api";
import { badgesFromReport, type BadgeMap } from "./badges";
import { nodeAtPoint, renderGraph, renderWorld } from "./canvas";
import { loadSidecar, moveNode, saveSidecar, toggleCollapsed, type LayoutSidecar } from "./layout";
import { bannerInfo, Playback } from "./playback";
import { buildPanelModel, formatParamValue, parseParamInput, type ParamMode } from "./panel";
import { renderPalette, type PaletteEntry } from "./palette";
import {
  addActionNode,
  addModuleInstance,
  initialState,
  savePayload,
  setParam,
  type EditorState,
} from "./state";
import type { ScenarioDocument } from "./types";

const api = new ApiClient();

const canvas = document.getElementById("graph-canvas") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const stage = document.getElementById("stage")!;
const statusLine = document.getElementById("status")!;
const offlineBanner = document.getElementById("offline-banner")!;
const banner = document.getElementById("banner")!;
const findingsLog = document.getElementById("findings")!;
const panelBody = document.getElementById("panel-body")!;
const paletteBox = document.getElementById("palette")!;
const scrubber = document.getElementById("scrubber") as HTMLInputElement;
const playbackTime = document.getElementById("playback-time")!;

let state: EditorState | null = null;
let sidecar: LayoutSidecar | null = null;
let badges: BadgeMap = new Map();
let playback: Playback | null = null;
let playbackMode = false;
let dragging: { nodeId: string; offsetX: number; offsetY: number } | null = null;
let validateTimer: number | undefined;

api.onOnlineChange = (online) => {
  offlineBanner.style.display = online ? "none" : "inline-block";
  if (online) void api.flushQueue();
};

function resizeCanvas(): void {
  canvas.width = stage.clientWidth;
  canvas.height = stage.clientHeight;
  repaint();
}
window.addEventListener("resize", resizeCanvas);

function repaint(): void {
  if (playbackMode && playback) {
    const info = bannerInfo(playback.trace);
    const highlight = info.highlightTime !== null
      && Math.abs(playback.time - info.highlightTime) < 0.2;
    renderWorld(ctx, playback.current(), highlight);
    return;
  }
  if (state && sidecar) {
    renderGraph(ctx, state.document, sidecar, { selection: state.selection, badges });
  }
}

function setStatus(text: string): void {
  statusLine.textContent = text;
}

function scheduleValidate(): void {
  window.clearTimeout(validateTimer);
  validateTimer = window.setTimeout(() => void refreshValidation(), 350);
}

async function refreshValidation(): Promise<void> {
  if (!state?.sessionId) return;
  try {
    const report = await api.validate(state.sessionId, state.document);
    state.report = report;
    badges = badgesFromReport(report);
    findingsLog.innerHTML = "";
    for (const finding of report.findings) {
      const row = document.createElement("div");
      row.className = `finding ${finding.severity}`;
      row.textContent = `${finding.rule_id} [${finding.node_ids.join(",")}] ${finding.message}`;
      findingsLog.appendChild(row);
    }
    repaint();
  } catch {
    // offline: stale badges stay up, banner already shown
  }
}

function renderPanel(): void {
  if (!state?.selection) {
    panelBody.textContent = "Select a node";
    return;
  }
  const node = state.document.nodes.find((candidate) => candidate.id === state!.selection);
  if (!node) {
    panelBody.textContent = "Select a node";
    return;
  }
  const model = buildPanelModel(node);
  panelBody.innerHTML = "";
  for (const row of model.parameters) {
    const container = document.createElement("div");
    container.className = "prop-row";
    const input = document.createElement("input");
    input.value = formatParamValue(row.value);
    input.placeholder = "unset";
    const unit = document.createElement("span");
    unit.textContent = row.unit;
    const mode = document.createElement("select");
    for (const option of ["scalar", "range", "set"]) {
      const element = document.createElement("option");
      element.value = option;
      element.textContent = option;
      element.selected = row.mode === option;
      mode.appendChild(element);
    }
    const commit = () => {
      try {
        const value = parseParamInput(mode.value as ParamMode, input.value, row.unit);
        setParam(state!, node.id, row.key, value);
        input.style.borderColor = "";
        scheduleValidate();
      } catch (error) {
        input.style.borderColor = "#d8323c";
        input.title = String(error);
      }
    };
    input.addEventListener("change", commit);
    mode.addEventListener("change", commit);
    const label = document.createElement("label");
    label.textContent = row.key;
    panelBody.appendChild(label);
    container.appendChild(input);
    container.appendChild(unit);
    container.appendChild(mode);
    panelBody.appendChild(container);
  }
  if (model.misc) {
    const heading = document.createElement("h3");
    heading.textContent = "Misc";
    panelBody.appendChild(heading);
    const rows: Array<[string, string, boolean]> = [
      ["name", model.misc.name, false],
      ["maneuver type", model.misc.maneuverType, false],
      ["category", model.misc.category, true],
      ["complexity level", String(model.misc.complexity), true],
    ];
    for (const [key, value, readOnly] of rows) {
      const row = document.createElement("div");
      row.className = "misc-row";
      row.innerHTML = `<strong>${key}:</strong> <span${readOnly ? ' class="ro"' : ""}>${value}</span>`;
      panelBody.appendChild(row);
    }
  }
}

async function openDocument(doc: ScenarioDocument): Promise<void> {
  state = initialState(doc);
  const session = await api.createScenario(doc);
  state.sessionId = session.id;
  state.revision = session.revision;
  sidecar = loadSidecar(window.localStorage, session.id, doc);
  playbackMode = false;
  banner.style.display = "none";
  setStatus(`${doc.name} · rev ${state.revision}`);
  repaint();
  renderPanel();
  await refreshValidation();
}

async function saveCurrent(): Promise<void> {
  if (!state?.sessionId || !sidecar) return;
  saveSidecar(window.localStorage, state.sessionId, sidecar);
  try {
    const result = await api.saveScenario(state.sessionId, state.revision, savePayload(state).scenario);
    state.revision = result.revision;
    state.dirty = false;
    setStatus(`${state.document.name} · rev ${state.revision} · saved`);
  } catch (error) {
    if (error instanceof StaleRevision) {
      setStatus("stale revision — reload the scenario");
      window.alert("Someone else saved this scenario. Reload to pick up their changes.");
    } else {
      setStatus("save queued (offline)");
      void api.submitEdit(async () => {
        const result = await api.saveScenario(state!.sessionId!, state!.revision, state!.document);
        state!.revision = result.revision;
      });
    }
  }
}

async function runAndPlay(): Promise<void> {
  if (!state?.sessionId) return;
  try {
    const trace = await api.run(state.sessionId, {});
    playback = new Playback(trace);
    playbackMode = true;
    const info = bannerInfo(trace);
    banner.textContent = info.text;
    banner.className = info.kind;
    banner.style.display = "block";
    if (info.highlightTime !== null) playback.time = info.highlightTime;
    repaint();
  } catch (error) {
    banner.style.display = "none";
    findingsLog.innerHTML = `<div class="finding Error">${String(error)}</div>`;
    await refreshValidation();
  }
}

function animate(): void {
  if (playback && playback.playing) {
    playback.tick(1 / 60);
    scrubber.value = String(Math.round(playback.progress * 1000));
    playbackTime.textContent = `t=${playback.time.toFixed(2)}s`;
    repaint();
  }
  window.requestAnimationFrame(animate);
}

function onPaletteDrop(entry: PaletteEntry): void {
  if (!state || !sidecar) return;
  const actor = state.document.actors[0]?.id ?? "actor";
  const node = entry.kind === "action"
    ? addActionNode(state, entry.name, actor)
    : addModuleInstance(state, entry.name, {});
  sidecar.positions[node.id] = { x: 80 + Math.random() * 240, y: 80 + Math.random() * 200 };
  state.selection = node.id;
  renderPanel();
  repaint();
  scheduleValidate();
  void api.submitEdit(async () => undefined);  // marks edit activity for the queue badge
}

canvas.addEventListener("mousedown", (event) => {
  if (!state || !sidecar || playbackMode) return;
  const rect = canvas.getBoundingClientRect();
  const x = event.clientX - rect.left;
  const y = event.clientY - rect.top;
  const node = nodeAtPoint(state.document, sidecar, x, y);
  state.selection = node?.id ?? null;
  if (node) {
    const position = sidecar.positions[node.id]!;
    dragging = { nodeId: node.id, offsetX: x - position.x, offsetY: y - position.y };
  }
  renderPanel();
  repaint();
});

canvas.addEventListener("mousemove", (event) => {
  if (!dragging || !sidecar) return;
  const rect = canvas.getBoundingClientRect();
  moveNode(sidecar, dragging.nodeId,
           event.clientX - rect.left - dragging.offsetX,
           event.clientY - rect.top - dragging.offsetY);
  repaint();
});

canvas.addEventListener("mouseup", () => {
  dragging = null;
});

canvas.addEventListener("dblclick", (event) => {
  if (!state || !sidecar || playbackMode) return;
  const rect = canvas.getBoundingClientRect();
  const node = nodeAtPoint(state.document, sidecar,
                           event.clientX - rect.left, event.clientY - rect.top);
  if (node?.kind === "ModuleInstance") {
    toggleCollapsed(sidecar, node.id);
    repaint();
  }
});

document.getElementById("btn-open")!.addEventListener("click", async () => {
  const response = await fetch("/fixtures/uis2.json");
  await openDocument(await response.json() as ScenarioDocument);
});
document.getElementById("btn-save")!.addEventListener("click", () => void saveCurrent());
document.getElementById("btn-validate")!.addEventListener("click", () => void refreshValidation());
document.getElementById("btn-run")!.addEventListener("click", () => void runAndPlay());
document.getElementById("btn-export")!.addEventListener("click", async () => {
  if (!state?.sessionId) return;
  try {
    const xml = await api.exportXosc(state.sessionId);
    const blob = new Blob([xml], { type: "application/xml" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = `${state.document.name}.xosc`;
    link.click();
  } catch (error) {
    findingsLog.innerHTML = `<div class="finding Error">${String(error)}</div>`;
  }
});
document.getElementById("btn-play")!.addEventListener("click", () => {
  if (!playback) return;
  playbackMode = true;
  if (playback.time >= playback.duration) playback.time = 0;
  playback.playing = !playback.playing;
});
scrubber.addEventListener("input", () => {
  if (!playback) return;
  playbackMode = true;
  playback.seekProgress(Number(scrubber.value) / 1000);
  playbackTime.textContent = `t=${playback.time.toFixed(2)}s`;
  repaint();
});

async function bootstrap(): Promise<void> {
  let moduleNames: string[] = [];
  try {
    moduleNames = (await api.listModules()).map((module) => module.name);
  } catch {
    // service down: palette still offers the built-in actions
  }
  renderPalette(paletteBox, moduleNames, onPaletteDrop);
  resizeCanvas();
  animate();
}

void bootstrap();
