/**
 * delta_max versus network size on log10-log10 axes, with the fitted
 * power-law slope drawn through the data and labeled with beta.
 */

import { ScalingFit, ScalingSummary } from "./csv.js";
import { Margin, SvgDoc, scaleLinear } from "./svg.js";

const MARGIN: Margin = { top: 30, right: 30, bottom: 50, left: 70 };

export function renderScaling(
  summary: ScalingSummary,
  fit: ScalingFit,
  width = 560,
  height = 420,
): string {
  const doc = new SvgDoc(width, height);
  const lx = summary.ns.map((n) => Math.log10(n));
  const ly = summary.medians.map((m) => Math.log10(Math.max(m, 1e-12)));
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const padX = 0.08 * (Math.max(...lx) - Math.min(...lx) || 1);
  const spanY = Math.max(...ly) - Math.min(...ly);
  const padY = 0.15 * (spanY || 1);
  const x0 = Math.min(...lx) - padX;
  const x1 = Math.max(...lx) + padX;
  const y0 = Math.min(...ly) - padY;
  const y1 = Math.max(...ly) + padY;
  const sx = scaleLinear(x0, x1, MARGIN.left, MARGIN.left + plotW);
  const sy = scaleLinear(y0, y1, MARGIN.top + plotH, MARGIN.top);

  doc.line(sx(x0), sy(y0), sx(x1), sy(y0), "#000000");
  doc.line(sx(x0), sy(y0), sx(x0), sy(y1), "#000000");
  for (let i = 0; i < lx.length; i++) {
    doc.line(sx(lx[i]), sy(y0), sx(lx[i]), sy(y0) + 5, "#000000");
    doc.text(sx(lx[i]), sy(y0) + 18, String(summary.ns[i]), {
      anchor: "middle",
      size: 10,
    });
  }

  // fitted line log10(delta_max) = intercept - beta * log10(n); anchor the
  // intercept by least squares against the plotted points so the line runs
  // through the data cloud (the slope comes from the fit file, never re-fit)
  const meanX = lx.reduce((a, b) => a + b, 0) / lx.length;
  const meanY = ly.reduce((a, b) => a + b, 0) / ly.length;
  const intercept = meanY + fit.beta * meanX;
  doc.polyline(
    [
      [sx(x0), sy(intercept - fit.beta * x0)],
      [sx(x1), sy(intercept - fit.beta * x1)],
    ],
    "#cc3333",
    2,
  );

  for (let i = 0; i < lx.length; i++) {
    doc.circle(sx(lx[i]), sy(ly[i]), 4, "#225ea8");
  }

  doc.text(MARGIN.left + plotW - 4, MARGIN.top + 16, `beta = ${fmtNum(fit.beta)}`, {
    anchor: "end",
  });
  doc.text(sx((x0 + x1) / 2), sy(y0) + 36, "n (log10)", { anchor: "middle" });
  doc.text(MARGIN.left - 50, MARGIN.top + plotH / 2, "delta_max (log10)", {
    anchor: "middle",
    rotate: -90,
  });
  return doc.render();
}

function fmtNum(v: number): string {
  return Number(v.toFixed(3)).toString();
}
