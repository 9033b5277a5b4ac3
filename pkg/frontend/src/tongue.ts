/**
 * Synchronization-tongue heatmap: one colored cell per (alpha, delta) grid
 * point, with the fitted persistence boundary delta = c1 - c2/alpha overlaid
 * (clipped to delta >= 0, so the curve enters the picture at
 * alpha = c2/c1).
 */

import { BoundaryFit, TongueGrid } from "./csv.js";
import { colorFor } from "./color.js";
import { Margin, SvgDoc, scaleLinear, ticks } from "./svg.js";

const MARGIN: Margin = { top: 30, right: 30, bottom: 50, left: 60 };

export function boundaryDelta(fit: BoundaryFit, alpha: number): number {
  return fit.c1 - fit.c2 / alpha;
}

/** Alpha at which the fitted boundary crosses delta = 0. */
export function boundaryZeroCrossing(fit: BoundaryFit): number {
  return fit.c2 / fit.c1;
}

export function renderTongue(
  grid: TongueGrid,
  fit: BoundaryFit | null,
  width = 640,
  height = 480,
): string {
  const doc = new SvgDoc(width, height);
  const { alphas, deltas, Ea } = grid;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  // cell boundaries at midpoints between grid values
  const aEdges = edges(alphas);
  const dEdges = edges(deltas);
  const ax = scaleLinear(aEdges[0], aEdges[aEdges.length - 1], MARGIN.left, MARGIN.left + plotW);
  const dy = scaleLinear(dEdges[0], dEdges[dEdges.length - 1], MARGIN.top + plotH, MARGIN.top);

  for (let i = 0; i < alphas.length; i++) {
    for (let j = 0; j < deltas.length; j++) {
      const x0 = ax(aEdges[i]);
      const x1 = ax(aEdges[i + 1]);
      const y0 = dy(dEdges[j + 1]);
      const y1 = dy(dEdges[j]);
      doc.rect(x0, y0, x1 - x0, y1 - y0, colorFor(Ea[i][j]));
    }
  }

  drawAxes(doc, ax, dy, aEdges, dEdges, "alpha", "delta");

  if (fit !== null) {
    const aLo = Math.max(aEdges[0], boundaryZeroCrossing(fit));
    const aHi = aEdges[aEdges.length - 1];
    if (aHi > aLo) {
      const pts: Array<[number, number]> = [];
      const steps = 200;
      for (let k = 0; k <= steps; k++) {
        const a = aLo + ((aHi - aLo) * k) / steps;
        const d = Math.max(0, boundaryDelta(fit, a));
        if (d <= dEdges[dEdges.length - 1]) {
          pts.push([ax(a), dy(d)]);
        }
      }
      doc.polyline(pts, "#ffffff", 2.5);
      doc.text(
        MARGIN.left + plotW - 4,
        MARGIN.top + 16,
        `boundary: ${fmtNum(fit.c1)} - ${fmtNum(fit.c2)}/alpha`,
        { anchor: "end" },
      );
    }
  }
  return doc.render();
}

function edges(values: number[]): number[] {
  if (values.length === 1) {
    return [values[0] - 0.5, values[0] + 0.5];
  }
  const out: number[] = [values[0] - (values[1] - values[0]) / 2];
  for (let i = 0; i + 1 < values.length; i++) {
    out.push((values[i] + values[i + 1]) / 2);
  }
  const last = values.length - 1;
  out.push(values[last] + (values[last] - values[last - 1]) / 2);
  return out;
}

function drawAxes(
  doc: SvgDoc,
  ax: (v: number) => number,
  dy: (v: number) => number,
  aEdges: number[],
  dEdges: number[],
  xLabel: string,
  yLabel: string,
): void {
  const x0 = ax(aEdges[0]);
  const x1 = ax(aEdges[aEdges.length - 1]);
  const y0 = dy(dEdges[0]);
  const y1 = dy(dEdges[dEdges.length - 1]);
  doc.line(x0, y0, x1, y0, "#000000");
  doc.line(x0, y0, x0, y1, "#000000");
  for (const t of ticks(aEdges[0], aEdges[aEdges.length - 1], 8)) {
    doc.line(ax(t), y0, ax(t), y0 + 5, "#000000");
    doc.text(ax(t), y0 + 18, String(t), { anchor: "middle", size: 10 });
  }
  for (const t of ticks(dEdges[0], dEdges[dEdges.length - 1], 6)) {
    doc.line(x0 - 5, dy(t), x0, dy(t), "#000000");
    doc.text(x0 - 8, dy(t) + 4, String(t), { anchor: "end", size: 10 });
  }
  doc.text((x0 + x1) / 2, y0 + 36, xLabel, { anchor: "middle" });
  doc.text(x0 - 40, (y0 + y1) / 2, yLabel, { anchor: "middle", rotate: -90 });
}

function fmtNum(v: number): string {
  return Number(v.toFixed(2)).toString();
}
