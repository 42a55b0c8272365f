// Application wiring: socket, store, canvas grid, charts, controls.

import { SocketClient } from "./client.js";
import { drawChart } from "./charts.js";
import { drawGrid, fitTransform, hitCell } from "./grid.js";
import type { SourceView } from "./protocol.js";
import { Store } from "./state.js";

type Tool = "add" | "modify" | "remove";

const store = new Store();
const client = new SocketClient();

let gridWidth = 12;
let gridHeight = 12;
let tool: Tool = "add";
let hover: { row: number; col: number } | null = null;
let selectedSource: SourceView | null = null;

const gridCanvas = document.getElementById("grid") as HTMLCanvasElement;
const chartCanvas = document.getElementById("chart") as HTMLCanvasElement;
const patternCanvas = document.getElementById("pattern") as HTMLCanvasElement;
const statusLine = document.getElementById("status") as HTMLElement;
const noticeLine = document.getElementById("notice") as HTMLElement;
const hoverLine = document.getElementById("hover") as HTMLElement;
const powerInput = document.getElementById("power") as HTMLInputElement;

function byId(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing element #${id}`);
  }
  return el;
}

async function loadConfig(): Promise<void> {
  const resp = await fetch("/api/config");
  const data = await resp.json();
  if (data.config) {
    gridWidth = data.config.gridWidth;
    gridHeight = data.config.gridHeight;
  }
}

function render(): void {
  const ctx = gridCanvas.getContext("2d");
  if (ctx && store.latest) {
    const t = fitTransform(gridWidth, gridHeight, gridCanvas.width,
      gridCanvas.height);
    drawGrid(ctx, store.latest, gridWidth, gridHeight, t, hover);
  }
  const chartCtx = chartCanvas.getContext("2d");
  if (chartCtx) {
    drawChart(chartCtx, store.history, [
      { key: "rootFlow", color: "#53b87c" },
      { key: "avgFlow", color: "#e8c547" },
      { key: "benefit", color: "#4f9dde" },
    ]);
  }
  const latest = store.latest;
  statusLine.textContent = latest
    ? `tick ${latest.tick}  rootFlow ${latest.rootFlow.toFixed(2)}  ` +
      `avgFlow ${latest.avgFlow.toFixed(2)}  benefit ` +
      `${latest.benefit.toFixed(2)}  ${latest.lastEvent}`
    : "waiting for events";
  const pendingNote = store.pending.size > 0
    ? ` | ${store.pending.size} pending command(s)` : "";
  noticeLine.textContent =
    (store.errors.length ? store.errors[store.errors.length - 1] + " | " : "")
    + store.notice + pendingNote;
}

function sourceAt(row: number, col: number): SourceView | null {
  if (!store.latest) {
    return null;
  }
  return store.latest.sources.find((s) => s.row === row && s.col === col)
    ?? null;
}

function onGridClick(ev: MouseEvent): void {
  const rect = gridCanvas.getBoundingClientRect();
  const t = fitTransform(gridWidth, gridHeight, gridCanvas.width,
    gridCanvas.height);
  const { row, col } = hitCell(ev.clientX - rect.left, ev.clientY - rect.top,
    t);
  if (row < 0 || col < 0 || row >= gridHeight || col >= gridWidth) {
    return;
  }
  const existing = sourceAt(row, col);
  if (tool === "add" && !existing) {
    store.sent(client.send("add_source",
      { row, col, power: Number(powerInput.value) }));
  } else if (tool === "remove" && existing) {
    store.sent(client.send("remove_source", { id: existing.id }));
  } else if ((tool === "modify" || tool === "add") && existing) {
    selectedSource = existing;
    powerInput.value = String(existing.power);
  }
  render();
}

function onGridMove(ev: MouseEvent): void {
  const rect = gridCanvas.getBoundingClientRect();
  const t = fitTransform(gridWidth, gridHeight, gridCanvas.width,
    gridCanvas.height);
  hover = hitCell(ev.clientX - rect.left, ev.clientY - rect.top, t);
  const cell = store.latest?.cells.find(
    (c) => c.row === hover?.row && c.col === hover?.col);
  hoverLine.textContent = cell
    ? `cell (${cell.row},${cell.col}) tag ${cell.tag} ` +
      `throughput ${cell.throughput.toFixed(2)}` +
      `${cell.blocked ? " [blocked]" : ""}${cell.rented ? " [rented]" : ""}`
    : "";
  render();
}

async function loadPattern(): Promise<void> {
  const select = byId("pattern-select") as HTMLSelectElement;
  const cells = (byId("pattern-cells") as HTMLInputElement).value;
  const resp = await fetch(
    `/api/patterns/${select.value}/samples?cells=${cells}`);
  if (!resp.ok) {
    return;
  }
  const data = await resp.json();
  const ctx = patternCanvas.getContext("2d");
  if (!ctx) {
    return;
  }
  ctx.clearRect(0, 0, patternCanvas.width, patternCanvas.height);
  const words: Array<Array<{ row: number; col: number; tag: string }>> =
    data.words.slice(0, 12);
  let ox = 4;
  let oy = 4;
  let rowMax = 0;
  for (const word of words) {
    const w = Math.max(...word.map((c) => c.col)) + 1;
    const h = Math.max(...word.map((c) => c.row)) + 1;
    const size = 10;
    if (ox + w * size + 4 > patternCanvas.width) {
      ox = 4;
      oy += rowMax + 8;
      rowMax = 0;
    }
    for (const cell of word) {
      ctx.fillStyle = cell.tag === "e" ? "#c94f6d" : "#53b87c";
      ctx.fillRect(ox + cell.col * size, oy + cell.row * size, size - 1,
        size - 1);
    }
    ox += w * size + 8;
    rowMax = Math.max(rowMax, h * size);
  }
}

function wireControls(): void {
  byId("pause").onclick = () => store.sent(client.send("pause"));
  byId("resume").onclick = () => store.sent(client.send("resume"));
  byId("step").onclick = () => store.sent(client.send("step", { n: 1 }));
  byId("step10").onclick = () => store.sent(client.send("step", { n: 10 }));
  byId("reconfig").onclick = () =>
    store.sent(client.send("trigger_reconfig"));
  (byId("speed") as HTMLInputElement).onchange = (ev) => {
    const value = Number((ev.target as HTMLInputElement).value);
    store.sent(client.send("set_speed", { ticksPerSecond: value }));
  };
  (byId("policy") as HTMLInputElement).onchange = (ev) => {
    const on = (ev.target as HTMLInputElement).checked;
    store.sent(client.send("set_policy", { policy: on ? "auto" : "off" }));
  };
  (byId("elastic") as HTMLInputElement).onchange = (ev) => {
    const on = (ev.target as HTMLInputElement).checked;
    store.sent(client.send("set_elastic", { enabled: on }));
  };
  powerInput.onchange = () => {
    if (selectedSource) {
      store.sent(client.send("modify_source",
        { id: selectedSource.id, power: Number(powerInput.value) }));
    }
  };
  for (const name of ["add", "modify", "remove"] as Tool[]) {
    (byId(`tool-${name}`) as HTMLInputElement).onchange = () => {
      tool = name;
    };
  }
  byId("pattern-load").onclick = () => void loadPattern();
  gridCanvas.addEventListener("click", onGridClick);
  gridCanvas.addEventListener("mousemove", onGridMove);
}

async function start(): Promise<void> {
  await loadConfig();
  client.onEvent = (event) => {
    store.apply(event);
    render();
  };
  client.onStatus = (status) => {
    byId("conn").textContent = status === "queued"
      ? "disconnected: commands queued, will replay on reconnect" : status;
  };
  const proto = location.protocol === "https:" ? "wss" : "ws";
  client.connect(`${proto}://${location.host}/ws`);
  wireControls();
  store.sent(client.send("get_state"));
  render();
}

void start();
