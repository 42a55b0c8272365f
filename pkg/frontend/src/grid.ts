// Grid geometry and canvas painting.  Geometry helpers are pure so the
// layout is testable without a canvas.

import type { CellView, SourceView, TickStatePayload } from "./protocol.js";

export interface ViewTransform {
  cellSize: number;
  offsetX: number;
  offsetY: number;
}

export interface Rect {
  x: number;
  y: number;
  size: number;
}

export const TAG_COLORS: Record<string, string> = {
  "2": "#4f9dde",
  "4": "#53b87c",
  "5": "#b07fe0",
  "6": "#e8c547",
  "7": "#dd8452",
  e: "#c94f6d",
};

export function cellRect(row: number, col: number, t: ViewTransform): Rect {
  return {
    x: t.offsetX + col * t.cellSize,
    y: t.offsetY + row * t.cellSize,
    size: t.cellSize,
  };
}

export function hitCell(
  px: number,
  py: number,
  t: ViewTransform,
): { row: number; col: number } {
  return {
    row: Math.floor((py - t.offsetY) / t.cellSize),
    col: Math.floor((px - t.offsetX) / t.cellSize),
  };
}

export function fitTransform(
  gridWidth: number,
  gridHeight: number,
  canvasWidth: number,
  canvasHeight: number,
): ViewTransform {
  const size = Math.max(
    4,
    Math.floor(
      Math.min(canvasWidth / gridWidth, canvasHeight / gridHeight),
    ),
  );
  return {
    cellSize: size,
    offsetX: Math.floor((canvasWidth - size * gridWidth) / 2),
    offsetY: Math.floor((canvasHeight - size * gridHeight) / 2),
  };
}

/** Neighbour count per cell; a closed ring has exactly two for each. */
export function adjacencyDegrees(
  cells: Array<{ row: number; col: number }>,
): number[] {
  const seen = new Set(cells.map((c) => `${c.row},${c.col}`));
  return cells.map(
    (c) =>
      Number(seen.has(`${c.row - 1},${c.col}`)) +
      Number(seen.has(`${c.row + 1},${c.col}`)) +
      Number(seen.has(`${c.row},${c.col - 1}`)) +
      Number(seen.has(`${c.row},${c.col + 1}`)),
  );
}

export function drawGrid(
  ctx: CanvasRenderingContext2D,
  state: TickStatePayload,
  gridWidth: number,
  gridHeight: number,
  t: ViewTransform,
  hover: { row: number; col: number } | null,
): void {
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  ctx.strokeStyle = "#2a2f36";
  ctx.lineWidth = 1;
  for (let r = 0; r <= gridHeight; r++) {
    const y = t.offsetY + r * t.cellSize;
    line(ctx, t.offsetX, y, t.offsetX + gridWidth * t.cellSize, y);
  }
  for (let c = 0; c <= gridWidth; c++) {
    const x = t.offsetX + c * t.cellSize;
    line(ctx, x, t.offsetY, x, t.offsetY + gridHeight * t.cellSize);
  }
  for (const cell of state.cells) {
    drawCell(ctx, cell, t);
  }
  for (const source of state.sources) {
    drawSource(ctx, source, t);
  }
  if (hover) {
    const rect = cellRect(hover.row, hover.col, t);
    ctx.strokeStyle = "#ffffff";
    ctx.strokeRect(rect.x + 0.5, rect.y + 0.5, rect.size - 1, rect.size - 1);
  }
}

function drawCell(
  ctx: CanvasRenderingContext2D,
  cell: CellView,
  t: ViewTransform,
): void {
  const rect = cellRect(cell.row, cell.col, t);
  ctx.fillStyle = TAG_COLORS[cell.tag] ?? "#888";
  ctx.globalAlpha = cell.blocked ? 0.35 : 1.0;
  ctx.fillRect(rect.x + 1, rect.y + 1, rect.size - 2, rect.size - 2);
  ctx.globalAlpha = 1.0;
  if (cell.rented) {
    ctx.strokeStyle = "#f5f5f5";
    ctx.setLineDash([3, 2]);
    ctx.strokeRect(rect.x + 1.5, rect.y + 1.5, rect.size - 3, rect.size - 3);
    ctx.setLineDash([]);
  }
  if (rect.size >= 14) {
    ctx.fillStyle = "#10141a";
    ctx.font = `${Math.floor(rect.size * 0.5)}px monospace`;
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText(cell.tag, rect.x + rect.size / 2, rect.y + rect.size / 2);
  }
}

function drawSource(
  ctx: CanvasRenderingContext2D,
  source: SourceView,
  t: ViewTransform,
): void {
  const rect = cellRect(source.row, source.col, t);
  const cx = rect.x + rect.size / 2;
  const cy = rect.y + rect.size / 2;
  ctx.beginPath();
  ctx.arc(cx, cy, Math.max(3, rect.size * 0.22), 0, Math.PI * 2);
  ctx.fillStyle = "#ff5b4d";
  ctx.fill();
  ctx.strokeStyle = "#10141a";
  ctx.stroke();
  if (rect.size >= 12) {
    ctx.fillStyle = "#ffd3cd";
    ctx.font = "10px monospace";
    ctx.textAlign = "center";
    ctx.textBaseline = "top";
    ctx.fillText(String(source.power), cx, rect.y + rect.size * 0.66);
  }
}

function line(
  ctx: CanvasRenderingContext2D,
  x1: number,
  y1: number,
  x2: number,
  y2: number,
): void {
  ctx.beginPath();
  ctx.moveTo(x1, y1);
  ctx.lineTo(x2, y2);
  ctx.stroke();
}
