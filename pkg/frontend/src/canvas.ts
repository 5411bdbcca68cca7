// Graph canvas: left-to-right node boxes, edge arrows, port pins on
// module frames, validation badges, and expanded module interiors.

import type { BadgeMap } from "./badges";
import { badgeLabel, worstSeverity } from "./badges";
import type { LayoutSidecar } from "./layout";
import { badgeColor, nodeStyle } from "./style";
import type { ModuleDefRecord, NodeRecord, ScenarioDocument } from "./types";

export const NODE_WIDTH = 150;
export const NODE_HEIGHT = 54;

export interface Box {
  x: number;
  y: number;
  width: number;
  height: number;
}

export function nodeBox(sidecar: LayoutSidecar, node: NodeRecord,
                        expanded: boolean): Box {
  const position = sidecar.positions[node.id] ?? { x: 0, y: 0 };
  if (node.kind === "ModuleInstance" && expanded) {
    return { x: position.x, y: position.y, width: NODE_WIDTH * 2.2, height: NODE_HEIGHT * 2.4 };
  }
  if (node.kind === "RootNode" || node.kind === "EndNode") {
    return { x: position.x, y: position.y, width: 64, height: NODE_HEIGHT };
  }
  return { x: position.x, y: position.y, width: NODE_WIDTH, height: NODE_HEIGHT };
}

export function nodeAtPoint(doc: ScenarioDocument, sidecar: LayoutSidecar,
                            x: number, y: number): NodeRecord | undefined {
  // topmost (last drawn) first
  for (let index = doc.nodes.length - 1; index >= 0; index -= 1) {
    const node = doc.nodes[index]!;
    const expanded = node.kind === "ModuleInstance" && sidecar.collapsed[node.id] === false;
    const box = nodeBox(sidecar, node, expanded);
    if (x >= box.x && x <= box.x + box.width && y >= box.y && y <= box.y + box.height) {
      return node;
    }
  }
  return undefined;
}

function nodeLabel(node: NodeRecord): string {
  if (node.kind === "RootNode") return "root";
  if (node.kind === "EndNode") return "end";
  if (node.kind === "Join") return node.policy === "OneFinished" ? "join ·1" : "join ·all";
  if (node.kind === "ModuleInstance") return node.module ?? node.id;
  return node.action_type ?? node.id;
}

function subtitle(node: NodeRecord): string {
  if (node.kind === "Maneuver" || node.kind === "Condition") {
    const target = node.target_actor ? ` → ${node.target_actor}` : "";
    return `${node.ref_actor ?? ""}${target}`;
  }
  if (node.kind === "ModuleInstance" && node.bindings) {
    return Object.values(node.bindings).join(", ");
  }
  return "";
}

function drawShape(ctx: CanvasRenderingContext2D, box: Box, shape: string): void {
  const radius = 10;
  ctx.beginPath();
  if (shape === "circle") {
    ctx.ellipse(box.x + box.width / 2, box.y + box.height / 2,
                box.width / 2, box.height / 2, 0, 0, Math.PI * 2);
  } else if (shape === "diamond") {
    ctx.moveTo(box.x + box.width / 2, box.y);
    ctx.lineTo(box.x + box.width, box.y + box.height / 2);
    ctx.lineTo(box.x + box.width / 2, box.y + box.height);
    ctx.lineTo(box.x, box.y + box.height / 2);
    ctx.closePath();
  } else if (shape === "octagon") {
    const cut = 12;
    ctx.moveTo(box.x + cut, box.y);
    ctx.lineTo(box.x + box.width - cut, box.y);
    ctx.lineTo(box.x + box.width, box.y + cut);
    ctx.lineTo(box.x + box.width, box.y + box.height - cut);
    ctx.lineTo(box.x + box.width - cut, box.y + box.height);
    ctx.lineTo(box.x + cut, box.y + box.height);
    ctx.lineTo(box.x, box.y + box.height - cut);
    ctx.lineTo(box.x, box.y + cut);
    ctx.closePath();
  } else {
    const r = shape === "pill" ? box.height / 2 : radius;
    ctx.roundRect(box.x, box.y, box.width, box.height, r);
  }
}

function drawEdge(ctx: CanvasRenderingContext2D, from: Box, to: Box): void {
  const startX = from.x + from.width;
  const startY = from.y + from.height / 2;
  const endX = to.x;
  const endY = to.y + to.height / 2;
  const bend = Math.max(30, (endX - startX) / 2);
  ctx.beginPath();
  ctx.moveTo(startX, startY);
  ctx.bezierCurveTo(startX + bend, startY, endX - bend, endY, endX, endY);
  ctx.stroke();
  const angle = Math.atan2(endY - ((startY + endY) / 2), Math.max(12, bend) * 0.8);
  ctx.beginPath();
  ctx.moveTo(endX, endY);
  ctx.lineTo(endX - 9, endY - 4 - angle);
  ctx.lineTo(endX - 9, endY + 4 - angle);
  ctx.closePath();
  ctx.fill();
}

export interface RenderOptions {
  selection: string | null;
  badges: BadgeMap;
}

export function renderGraph(ctx: CanvasRenderingContext2D, doc: ScenarioDocument,
                            sidecar: LayoutSidecar, options: RenderOptions): void {
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  ctx.lineWidth = 1.6;
  ctx.strokeStyle = "#8b8b8b";
  ctx.fillStyle = "#8b8b8b";
  const boxes: Record<string, Box> = {};
  for (const node of doc.nodes) {
    const expanded = node.kind === "ModuleInstance" && sidecar.collapsed[node.id] === false;
    boxes[node.id] = nodeBox(sidecar, node, expanded);
  }
  for (const edge of doc.edges) {
    const from = boxes[edge.from];
    const to = boxes[edge.to];
    if (from && to) drawEdge(ctx, from, to);
  }
  for (const node of doc.nodes) {
    drawNode(ctx, doc, sidecar, node, boxes[node.id]!, options);
  }
}

function drawNode(ctx: CanvasRenderingContext2D, doc: ScenarioDocument,
                  sidecar: LayoutSidecar, node: NodeRecord, box: Box,
                  options: RenderOptions): void {
  const expanded = node.kind === "ModuleInstance" && sidecar.collapsed[node.id] === false;
  const style = nodeStyle(node.kind, node.category, node.policy);
  ctx.save();
  drawShape(ctx, box, expanded ? "frame" : style.shape);
  ctx.fillStyle = expanded ? "#eaf6ec" : style.fill;
  ctx.fill();
  ctx.lineWidth = options.selection === node.id ? 3 : 1.5;
  ctx.strokeStyle = options.selection === node.id ? "#1463d8" : style.stroke;
  ctx.stroke();

  ctx.fillStyle = expanded ? "#2f7a40" : style.text;
  ctx.font = "600 13px system-ui, sans-serif";
  ctx.textBaseline = "middle";
  ctx.textAlign = "center";
  const labelY = expanded ? box.y + 14 : box.y + box.height / 2 - 7;
  ctx.fillText(`${style.icon} ${nodeLabel(node)}`, box.x + box.width / 2, labelY);
  ctx.font = "11px system-ui, sans-serif";
  const sub = subtitle(node);
  if (sub && !expanded) {
    ctx.fillText(sub, box.x + box.width / 2, box.y + box.height / 2 + 10);
  }

  if (node.kind === "ModuleInstance") {
    drawPorts(ctx, doc, node, box);
    if (expanded) drawModuleInterior(ctx, doc, node, box);
  }

  const findings = options.badges.get(node.id);
  if (findings && findings.length > 0) {
    const severity = worstSeverity(findings);
    ctx.beginPath();
    ctx.fillStyle = badgeColor(severity);
    ctx.arc(box.x + box.width - 4, box.y + 4, 10, 0, Math.PI * 2);
    ctx.fill();
    ctx.fillStyle = "#ffffff";
    ctx.font = "700 9px system-ui, sans-serif";
    ctx.fillText(badgeLabel(findings), box.x + box.width - 4, box.y + 5);
  }
  ctx.restore();
}

function drawPorts(ctx: CanvasRenderingContext2D, doc: ScenarioDocument,
                   node: NodeRecord, box: Box): void {
  const moduleDef = doc.module_defs.find((def) => def.name === node.module);
  if (!moduleDef) return;
  const inNames = Object.keys(moduleDef.in_ports);
  const outNames = Object.keys(moduleDef.out_ports);
  ctx.font = "9px system-ui, sans-serif";
  inNames.forEach((name, index) => {
    const y = box.y + ((index + 1) * box.height) / (inNames.length + 1);
    ctx.beginPath();
    ctx.fillStyle = "#2f7a40";
    ctx.arc(box.x, y, 4, 0, Math.PI * 2);
    ctx.fill();
    ctx.textAlign = "left";
    ctx.fillText(name, box.x + 6, y - 6);
  });
  outNames.forEach((name, index) => {
    const y = box.y + ((index + 1) * box.height) / (outNames.length + 1);
    ctx.beginPath();
    ctx.fillStyle = "#2f7a40";
    ctx.arc(box.x + box.width, y, 4, 0, Math.PI * 2);
    ctx.fill();
    ctx.textAlign = "right";
    ctx.fillText(name, box.x + box.width - 6, y - 6);
  });
}

function drawModuleInterior(ctx: CanvasRenderingContext2D, doc: ScenarioDocument,
                            node: NodeRecord, box: Box): void {
  // read-only inline view of the definition's chain
  const moduleDef: ModuleDefRecord | undefined =
    doc.module_defs.find((def) => def.name === node.module);
  if (!moduleDef) return;
  const inner = moduleDef.elements;
  const width = Math.min(120, (box.width - 30) / Math.max(1, inner.length) - 8);
  inner.forEach((element, index) => {
    const innerBox: Box = {
      x: box.x + 15 + index * (width + 8),
      y: box.y + box.height / 2 - 14,
      width,
      height: 34,
    };
    const style = nodeStyle(element.kind, element.category, element.policy);
    drawShape(ctx, innerBox, style.shape === "pill" ? "pill" : "rect");
    ctx.fillStyle = style.fill;
    ctx.fill();
    ctx.strokeStyle = style.stroke;
    ctx.lineWidth = 1;
    ctx.stroke();
    ctx.fillStyle = style.text;
    ctx.font = "10px system-ui, sans-serif";
    ctx.textAlign = "center";
    ctx.fillText(element.action_type ?? element.id,
                 innerBox.x + innerBox.width / 2, innerBox.y + innerBox.height / 2);
    if (index > 0) {
      ctx.beginPath();
      ctx.strokeStyle = "#8b8b8b";
      ctx.moveTo(innerBox.x - 8, innerBox.y + innerBox.height / 2);
      ctx.lineTo(innerBox.x, innerBox.y + innerBox.height / 2);
      ctx.stroke();
    }
  });
}

/** World-frame actor rectangles for trace playback, drawn over a scaled grid. */
export function renderWorld(ctx: CanvasRenderingContext2D,
                            actors: Record<string, { x: number; y: number; heading: number }>,
                            highlight: boolean): void {
  const canvasWidth = ctx.canvas.width;
  const canvasHeight = ctx.canvas.height;
  ctx.clearRect(0, 0, canvasWidth, canvasHeight);
  const scale = 6;
  const originX = canvasWidth / 2;
  const originY = canvasHeight / 2;
  ctx.strokeStyle = "#e4e4e4";
  ctx.lineWidth = 1;
  for (let grid = -60; grid <= 60; grid += 10) {
    ctx.beginPath();
    ctx.moveTo(originX + grid * scale, 0);
    ctx.lineTo(originX + grid * scale, canvasHeight);
    ctx.stroke();
    ctx.beginPath();
    ctx.moveTo(0, originY - grid * scale);
    ctx.lineTo(canvasWidth, originY - grid * scale);
    ctx.stroke();
  }
  const palette = ["#1463d8", "#e05252", "#57b26a", "#e8a33d"];
  let index = 0;
  for (const [actorId, state] of Object.entries(actors)) {
    const screenX = originX + state.x * scale;
    const screenY = originY - state.y * scale;
    ctx.save();
    ctx.translate(screenX, screenY);
    ctx.rotate(-state.heading);
    ctx.fillStyle = highlight ? "#d8323c" : palette[index % palette.length]!;
    ctx.fillRect(-12, -5, 24, 10);
    ctx.restore();
    ctx.fillStyle = "#333333";
    ctx.font = "11px system-ui, sans-serif";
    ctx.textAlign = "center";
    ctx.fillText(actorId, screenX, screenY - 12);
    index += 1;
  }
}
