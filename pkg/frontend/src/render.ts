/**
 * Figure assembly: one entry point, four kinds.
 *
 * timeseries — mean positions of both oscillators over time
 * staircase  — dominant frequency pair across the coupling sweep
 * boundary   — locking threshold versus detuning
 * heatmap    — localized-mode frequency raster with boundary overlay
 *
 * Rendering is pure string assembly over already-loaded CSV text, so a
 * failed validation can never leave a partial file behind.
 */

import { column, parseCsv, Table } from "./csv.js";
import { checkColumns, FigureSpec, OVERLAY_COLUMNS, REQUIRED_COLUMNS } from "./figspec.js";
import { decadeTicks, extent, linearScale, log10Scale, niceTicks, Scale } from "./scale.js";
import * as svg from "./svg.js";

const COL_1 = "#2457c5"; // oscillator 1
const COL_2 = "#c2332b"; // oscillator 2
const COL_BOUNDARY = "#000";

const { left: ML, right: MR, top: MT, bottom: MB } = svg.MARGINS;
const PW = svg.WIDTH - ML - MR;
const PH = svg.HEIGHT - MT - MB;

function drawAxes(
  xTicks: number[],
  yTicks: number[],
  x: Scale,
  y: Scale,
  xLabel: string,
  yLabel: string,
  xFmt: (v: number) => string = String,
): string {
  let s = "";
  for (const v of yTicks) {
    const yy = y(v);
    s += svg.line(ML, yy, ML + PW, yy, "#e5e5e5", 0.6);
    s += svg.text(ML - 6, yy + 3, trimNum(v), 10, { anchor: "end", fill: "#555" });
  }
  for (const v of xTicks) {
    const xx = x(v);
    s += svg.line(xx, MT, xx, MT + PH, "#f0f0f0", 0.6);
    s += svg.text(xx, MT + PH + 14, xFmt(v), 10, { anchor: "middle", fill: "#555" });
  }
  s += svg.line(ML, MT + PH, ML + PW, MT + PH, "#999", 1);
  s += svg.line(ML, MT, ML, MT + PH, "#999", 1);
  s += svg.text(ML + PW / 2, svg.HEIGHT - 14, xLabel, 11, { anchor: "middle" });
  s += svg.text(16, MT + PH / 2, yLabel, 11, { anchor: "middle", rotate: -90 });
  return s;
}

function trimNum(v: number): string {
  if (v !== 0 && (Math.abs(v) < 1e-3 || Math.abs(v) >= 1e4)) return v.toExponential(0);
  return String(parseFloat(v.toPrecision(6)));
}

function points(xs: number[], ys: number[], x: Scale, y: Scale): string {
  return xs.map((v, i) => `${x(v).toFixed(1)},${y(ys[i]!).toFixed(1)}`).join(" ");
}

function legend(entries: [string, string][], xx: number): string {
  let s = "";
  entries.forEach(([label, color], i) => {
    const yy = MT + 8 + 16 * i;
    s += svg.line(xx, yy, xx + 18, yy, color, 2);
    s += svg.text(xx + 24, yy + 3.5, label, 10, { fill: "#333" });
  });
  return s;
}

function title(spec: FigureSpec, fallback: string): string {
  return svg.text(ML, MT - 18, spec.title ?? fallback, 13, { weight: "600" });
}

function renderTimeseries(spec: FigureSpec, table: Table): string {
  const t = column(table, "t");
  const x1 = column(table, "x1");
  const x2 = column(table, "x2");
  const [tLo, tHi] = extent(t);
  const [lo, hi] = extent([...x1, ...x2]);
  const pad = 0.08 * (hi - lo || 1);
  const x = linearScale(tLo, tHi, ML, ML + PW);
  const y = linearScale(lo - pad, hi + pad, MT + PH, MT);

  let s = svg.open();
  s += title(spec, "Mean positions");
  s += drawAxes(niceTicks(tLo, tHi, 8), niceTicks(lo - pad, hi + pad, 6), x, y, "t", "<x>");
  if (lo < 0 && hi > 0) s += svg.line(ML, y(0), ML + PW, y(0), "#bbb", 0.8, "4,4");
  s += svg.polyline(points(t, x1, x, y), COL_1, 1.3);
  s += svg.polyline(points(t, x2, x, y), COL_2, 1.3);
  s += legend([["<x1>", COL_1], ["<x2>", COL_2]], ML + PW - 90);
  return s + svg.close();
}

function renderStaircase(spec: FigureSpec, table: Table): string {
  const alpha = column(table, "alpha");
  const f1 = column(table, "freq1");
  const f2 = column(table, "freq2");
  column(table, "locked"); // required by the contract even though color encodes it implicitly
  const [aLo, aHi] = extent(alpha);
  const [fLo, fHi] = extent([...f1, ...f2]);
  const pad = 0.08 * (fHi - fLo || 1);
  const x = log10Scale(aLo, aHi, ML, ML + PW);
  const y = linearScale(fLo - pad, fHi + pad, MT + PH, MT);

  let s = svg.open();
  s += title(spec, "Dominant frequencies vs coupling");
  const xt = decadeTicks(aLo, aHi);
  s += drawAxes(xt, niceTicks(fLo - pad, fHi + pad, 6), x, y, "alpha", "frequency", trimNum);
  s += svg.polyline(points(alpha, f1, x, y), COL_1, 1.2);
  s += svg.polyline(points(alpha, f2, x, y), COL_2, 1.2);
  for (let i = 0; i < alpha.length; i++) {
    s += svg.circle(x(alpha[i]!), y(f1[i]!), 2.4, COL_1);
    s += svg.circle(x(alpha[i]!), y(f2[i]!), 2.4, COL_2);
  }
  s += legend([["oscillator 1", COL_1], ["oscillator 2", COL_2]], ML + PW - 120);
  return s + svg.close();
}

function renderBoundary(spec: FigureSpec, table: Table): string {
  const dw = column(table, "delta_omega");
  const star = column(table, "alpha_star");
  const [dLo, dHi] = extent(dw);
  const sHi = extent(star)[1];
  const dPad = 0.08 * (dHi - dLo || 1);
  const x = linearScale(dLo - dPad, dHi + dPad, ML, ML + PW);
  const y = linearScale(0, sHi * 1.15 || 1, MT + PH, MT);

  let s = svg.open();
  s += title(spec, "Locking threshold vs detuning");
  s += drawAxes(
    niceTicks(dLo - dPad, dHi + dPad, 6),
    niceTicks(0, sHi * 1.15, 6),
    x,
    y,
    "delta_omega",
    "alpha*",
  );
  s += svg.polyline(points(dw, star, x, y), COL_1, 1.4);
  for (let i = 0; i < dw.length; i++) s += svg.circle(x(dw[i]!), y(star[i]!), 3, COL_1);
  return s + svg.close();
}

function renderHeatmap(spec: FigureSpec, table: Table, overlay?: Table): string {
  const alpha = column(table, "alpha");
  const dw = column(table, "delta_omega");
  const wp = column(table, "omega_prime_over_omega0");

  const xs = [...new Set(alpha)].sort((a, b) => a - b);
  const ys = [...new Set(dw)].sort((a, b) => a - b);
  const xStep = xs.length > 1 ? xs[1]! - xs[0]! : 1;
  const yStep = ys.length > 1 ? ys[1]! - ys[0]! : 1;
  const x = linearScale(xs[0]! - xStep / 2, xs[xs.length - 1]! + xStep / 2, ML, ML + PW);
  const y = linearScale(ys[0]! - yStep / 2, ys[ys.length - 1]! + yStep / 2, MT + PH, MT);
  const cellW = Math.abs(x(xStep) - x(0));
  const cellH = Math.abs(y(yStep) - y(0));

  const finite = wp.filter((v) => !Number.isNaN(v));
  const [vLo, vHi] = finite.length > 0 ? extent(finite) : [-1, 0];

  let s = svg.open();
  s += title(spec, "Localized-mode frequency over (alpha, detuning)");
  let cells = "";
  for (let i = 0; i < wp.length; i++) {
    const fill = Number.isNaN(wp[i]!) ? svg.NAN_FILL : svg.blueRamp(wp[i]!, vLo, vHi);
    cells += svg.rect(x(alpha[i]!) - cellW / 2, y(dw[i]!) - cellH / 2, cellW, cellH, fill);
  }
  s += cells;
  if (overlay) {
    const bdw = column(overlay, "delta_omega");
    const bac = column(overlay, "alpha_c");
    s += svg.polyline(points(bac, bdw, x, y), COL_BOUNDARY, 1.6);
  }
  s += drawAxes(niceTicks(xs[0]!, xs[xs.length - 1]!, 6), niceTicks(ys[0]!, ys[ys.length - 1]!, 6), x, y, "alpha", "delta_omega");
  s += svg.text(ML + PW - 4, MT - 6, `omega'/omega0 in [${vLo.toFixed(3)}, ${vHi.toFixed(3)}], gray = none`, 9, {
    anchor: "end",
    fill: "#666",
  });
  return s + svg.close();
}

export function renderFigure(spec: FigureSpec, inputText: string, overlayText?: string): string {
  const table = parseCsv(inputText);
  checkColumns(table, REQUIRED_COLUMNS[spec.kind]);
  let overlay: Table | undefined;
  if (spec.kind === "heatmap" && overlayText !== undefined) {
    overlay = parseCsv(overlayText);
    checkColumns(overlay, OVERLAY_COLUMNS);
  }
  switch (spec.kind) {
    case "timeseries":
      return renderTimeseries(spec, table);
    case "staircase":
      return renderStaircase(spec, table);
    case "boundary":
      return renderBoundary(spec, table);
    case "heatmap":
      return renderHeatmap(spec, table, overlay);
  }
}
