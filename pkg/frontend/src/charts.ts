// Rolling line charts; the path computation stays pure for testing.

import type { FlowSample } from "./state.js";

export interface ChartSeries {
  key: "rootFlow" | "avgFlow" | "benefit";
  color: string;
}

export function seriesPath(
  values: number[],
  width: number,
  height: number,
  maxValue: number,
): Array<[number, number]> {
  if (values.length === 0) {
    return [];
  }
  const step = values.length > 1 ? width / (values.length - 1) : 0;
  const scale = maxValue > 0 ? (height - 4) / maxValue : 0;
  return values.map((v, i) => [i * step, height - 2 - v * scale]);
}

export function drawChart(
  ctx: CanvasRenderingContext2D,
  history: FlowSample[],
  series: ChartSeries[],
): void {
  const { width, height } = ctx.canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#161a20";
  ctx.fillRect(0, 0, width, height);
  let max = 0;
  for (const s of series) {
    for (const sample of history) {
      max = Math.max(max, Math.abs(sample[s.key]));
    }
  }
  for (const s of series) {
    const pts = seriesPath(history.map((h) => h[s.key]), width, height, max);
    if (pts.length < 2) {
      continue;
    }
    ctx.beginPath();
    ctx.moveTo(pts[0][0], pts[0][1]);
    for (const [x, y] of pts.slice(1)) {
      ctx.lineTo(x, y);
    }
    ctx.strokeStyle = s.color;
    ctx.lineWidth = 1.5;
    ctx.stroke();
  }
}
