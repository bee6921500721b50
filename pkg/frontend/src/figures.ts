/** The five figure kinds, each a pure map from CSV text to a Scene.
 *
 * compare : log-norm curves (numeric vs asymptotic) over the sweep axis,
 *           with a linear rel_log_err inset
 * levels  : traced level-curve points against the closed-form law
 * mode    : quasimode profile (real and imaginary parts)
 * heatmap : log-norm over a z-grid, colored cells
 * dk      : growth rate, closed form vs quadrature
 */

import { column, parseCsv, requireColumns, SchemaError, Table } from "./csv.js";
import {
  extent,
  legend,
  linearScale,
  makeFrame,
  markers,
  PALETTE,
  polyline,
  Scene,
} from "./scene.js";

export const FIGURE_KINDS = ["compare", "levels", "mode", "heatmap", "dk"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureSpec {
  kind: FigureKind;
  csvText: string;
  xLog?: boolean;
}

const SWEEP_CANDIDATES = ["re_z", "im_z", "alpha", "h"];

/** The sweep axis is the first candidate column whose values vary. */
function sweepAxis(table: Table): { name: string; values: number[] } {
  for (const name of SWEEP_CANDIDATES) {
    const i = table.header.indexOf(name);
    if (i < 0) continue;
    const values = column(table, i);
    const finite = values.filter((v) => !Number.isNaN(v));
    if (finite.length > 0 && Math.min(...finite) !== Math.max(...finite)) {
      return { name, values };
    }
  }
  const idx = requireColumns(table, ["re_z"]);
  return { name: "re_z", values: column(table, idx.re_z) };
}

function renderCompare(table: Table, xLog?: boolean): Scene {
  const idx = requireColumns(table, ["log_norm_numeric", "log_norm_asym", "rel_log_err"]);
  const axis = sweepAxis(table);
  const numeric = column(table, idx.log_norm_numeric);
  const asym = column(table, idx.log_norm_asym);
  const rel = column(table, idx.rel_log_err);
  const frame = makeFrame({
    width: 640,
    height: 420,
    xDomain: extent(axis.values),
    yDomain: extent([...numeric, ...asym]),
    xLog,
    title: "resolvent norm: numeric vs asymptotic",
    xLabel: axis.name,
    yLabel: "log ||(P - z)^-1||",
  });
  polyline(frame, axis.values, asym, PALETTE.asymptotic, 2);
  polyline(frame, axis.values, numeric, PALETTE.numeric, 1.5);
  markers(frame, axis.values, numeric, PALETTE.numeric, 3);
  legend(frame, [["numeric", PALETTE.numeric], ["asymptotic", PALETTE.asymptotic]]);
  addRelErrInset(frame.scene, axis.values, rel, xLog);
  return frame.scene;
}

function addRelErrInset(scene: Scene, xs: number[], rel: number[], xLog?: boolean): void {
  const box = { x0: 400, y0: 64, x1: 608, y1 : 150 };
  scene.items.push({ kind: "rect", x: box.x0, y: box.y0, w: box.x1 - box.x0, h: box.y1 - box.y0, fill: "#f7f7f7" });
  const sx = linearScale(extent(xs), [box.x0 + 8, box.x1 - 8]);
  const sy = linearScale([0, Math.max(...rel.filter((v) => !Number.isNaN(v)), 1e-12)], [box.y1 - 8, box.y0 + 14]);
  const pts: Array<[number, number]> = [];
  for (let i = 0; i < xs.length; i++) {
    if (Number.isNaN(rel[i])) continue;
    pts.push([sx.map(xs[i]), sy.map(rel[i])]);
  }
  scene.items.push({ kind: "polyline", points: pts, stroke: PALETTE.error, width: 1.5 });
  for (const [px, py] of pts) {
    scene.items.push({ kind: "circle", cx: px, cy: py, r: 2, fill: PALETTE.error });
  }
  scene.items.push({ kind: "text", x: (box.x0 + box.x1) / 2, y: box.y0 + 10, text: "rel_log_err (linear)", size: 9, anchor: "middle" });
}

function renderLevels(table: Table): Scene {
  const idx = requireColumns(table, ["eps", "axis", "axis_value", "re_z", "im_z", "source"]);
  const axisKind = table.rows[0][idx.axis];
  const transverse = axisKind === "fixed-re" ? idx.im_z : idx.re_z;
  const axisValues = column(table, idx.axis_value);
  const trans = column(table, transverse);
  const sources = table.rows.map((r) => r[idx.source]);
  const frame = makeFrame({
    width: 640,
    height: 420,
    xDomain: extent(axisValues),
    yDomain: extent(trans),
    title: "level curve: traced vs closed-form law",
    xLabel: axisKind === "fixed-re" ? "Re z" : "Im z",
    yLabel: axisKind === "fixed-re" ? "Im z" : "Re z",
  });
  const pick = (src: string) => {
    const xs: number[] = [];
    const ys: number[] = [];
    for (let i = 0; i < sources.length; i++) {
      if (sources[i] === src) {
        xs.push(axisValues[i]);
        ys.push(trans[i]);
      }
    }
    return { xs, ys };
  };
  const asym = pick("asymptotic");
  const numeric = pick("numeric");
  if (asym.xs.length > 0) polyline(frame, asym.xs, asym.ys, PALETTE.asymptotic, 2);
  if (numeric.xs.length > 0) markers(frame, numeric.xs, numeric.ys, PALETTE.numeric, 4);
  legend(frame, [["traced (numeric)", PALETTE.numeric], ["closed-form law", PALETTE.asymptotic]]);
  return frame.scene;
}

function renderMode(table: Table): Scene {
  const idx = requireColumns(table, ["x", "re", "im"]);
  const xs = column(table, idx.x);
  const re = column(table, idx.re);
  const im = column(table, idx.im);
  const frame = makeFrame({
    width: 640,
    height: 420,
    xDomain: extent(xs),
    yDomain: extent([...re, ...im]),
    title: "quasimode profile",
    xLabel: "x",
    yLabel: "mode value",
  });
  polyline(frame, xs, re, PALETTE.numeric, 1.5);
  polyline(frame, xs, im, PALETTE.tertiary, 1.5);
  legend(frame, [["Re", PALETTE.numeric], ["Im", PALETTE.tertiary]]);
  return frame.scene;
}

function colorRamp(t: number): string {
  // dark blue -> teal -> yellow (three-stop, perceptually ordered)
  const stops: Array<[number, number, number]> = [
    [20, 30, 90],
    [35, 140, 140],
    [250, 220, 60],
  ];
  const s = Math.min(Math.max(t, 0), 1) * 2;
  const i = s < 1 ? 0 : 1;
  const f = s - i;
  const mix = (a: number, b: number) => Math.round(a + (b - a) * f);
  const rgb = [
    mix(stops[i][0], stops[i + 1][0]),
    mix(stops[i][1], stops[i + 1][1]),
    mix(stops[i][2], stops[i + 1][2]),
  ];
  return `#${rgb.map((c) => c.toString(16).padStart(2, "0")).join("")}`;
}

function renderHeatmap(table: Table): Scene {
  const idx = requireColumns(table, ["re_z", "im_z", "log_norm_numeric"]);
  const res = column(table, idx.re_z);
  const ims = column(table, idx.im_z);
  const vals = column(table, idx.log_norm_numeric);
  const uniq = (v: number[]) => Array.from(new Set(v)).sort((a, b) => a - b);
  const reTicks = uniq(res);
  const imTicks = uniq(ims);
  if (reTicks.length < 2 || imTicks.length < 2) {
    throw new SchemaError("heatmap needs a 2D grid of re_z and im_z values");
  }
  const frame = makeFrame({
    width: 640,
    height: 440,
    xDomain: [reTicks[0], reTicks[reTicks.length - 1]],
    yDomain: [imTicks[0], imTicks[imTicks.length - 1]],
    title: "log resolvent norm over the z-grid",
    xLabel: "Re z",
    yLabel: "Im z",
  });
  const [vlo, vhi] = extent(vals);
  const cw = (frame.plot.x1 - frame.plot.x0) / (reTicks.length - 1);
  const ch = (frame.plot.y1 - frame.plot.y0) / (imTicks.length - 1);
  for (let i = 0; i < res.length; i++) {
    if (Number.isNaN(vals[i])) continue;
    const cx = frame.x.map(res[i]);
    const cy = frame.y.map(ims[i]);
    const t = (vals[i] - vlo) / (vhi - vlo || 1);
    frame.scene.items.push({
      kind: "rect",
      x: cx - cw / 2,
      y: cy - ch / 2,
      w: cw,
      h: ch,
      fill: colorRamp(t),
    });
  }
  frame.scene.items.push({
    kind: "text", x: frame.plot.x1, y: frame.plot.y0 - 8,
    text: `log norm in [${vlo.toPrecision(3)}, ${vhi.toPrecision(3)}]`, size: 10, anchor: "end",
  });
  return frame.scene;
}

function renderDk(table: Table): Scene {
  const idx = requireColumns(table, ["theta", "rate_closed", "rate_quadrature"]);
  const thetas = column(table, idx.theta);
  const closed = column(table, idx.rate_closed);
  const quadr = column(table, idx.rate_quadrature);
  const frame = makeFrame({
    width: 640,
    height: 420,
    xDomain: [0, Math.max(...thetas)],
    yDomain: [0, Math.max(...closed, ...quadr)],
    title: "spectral projection growth rate",
    xLabel: "theta",
    yLabel: "rate",
  });
  polyline(frame, thetas, closed, PALETTE.asymptotic, 2);
  markers(frame, thetas, quadr, PALETTE.numeric, 3);
  legend(frame, [["closed form", PALETTE.asymptotic], ["quadrature", PALETTE.numeric]]);
  return frame.scene;
}

export function renderFigure(spec: FigureSpec): Scene {
  const table = parseCsv(spec.csvText);
  switch (spec.kind) {
    case "compare":
      return renderCompare(table, spec.xLog);
    case "levels":
      return renderLevels(table);
    case "mode":
      return renderMode(table);
    case "heatmap":
      return renderHeatmap(table);
    case "dk":
      return renderDk(table);
    default:
      throw new SchemaError(`unknown figure kind ${String(spec.kind)}`);
  }
}
