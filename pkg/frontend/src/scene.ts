/** Figure scene graph: backend-neutral primitives plus axis scaffolding.
 *
 * Figures build a Scene; svg.ts serializes it losslessly, png.ts
 * rasterizes the geometric items (text is SVG-only).  Everything is a
 * pure function of the input data, so renders are deterministic.
 */

export type Item =
  | { kind: "rect"; x: number; y: number; w: number; h: number; fill: string }
  | { kind: "line"; x1: number; y1: number; x2: number; y2: number; stroke: string; width: number }
  | { kind: "polyline"; points: Array<[number, number]>; stroke: string; width: number }
  | { kind: "circle"; cx: number; cy: number; r: number; fill: string }
  | { kind: "text"; x: number; y: number; text: string; size: number; anchor: "start" | "middle" | "end" };

export interface Scene {
  width: number;
  height: number;
  items: Item[];
}

export interface Scale {
  map(v: number): number;
  domain: [number, number];
  range: [number, number];
  log: boolean;
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 === 0 ? 1 : d1 - d0;
  return {
    map: (v) => r0 + ((v - d0) / span) * (r1 - r0),
    domain,
    range,
    log: false,
  };
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const d0 = Math.log10(domain[0]);
  const d1 = Math.log10(domain[1]);
  const span = d1 - d0 === 0 ? 1 : d1 - d0;
  const [r0, r1] = range;
  return {
    map: (v) => r0 + ((Math.log10(v) - d0) / span) * (r1 - r0),
    domain,
    range,
    log: true,
  };
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (Number.isNaN(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) {
    lo = 0;
    hi = 1;
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

export function ticks(domain: [number, number], count = 5): number[] {
  const [lo, hi] = domain;
  const rawStep = (hi - lo) / Math.max(count, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(Math.abs(rawStep) || 1)));
  const norm = rawStep / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = start; v <= hi + 1e-12 * Math.abs(step); v += step) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}

export function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  return Number(v.toPrecision(4)).toString();
}

export const PALETTE = {
  numeric: "#1f6fb2",
  asymptotic: "#c85a19",
  tertiary: "#3a9e52",
  grid: "#d8d8d8",
  axis: "#444444",
  error: "#8050a0",
};

export interface Frame {
  scene: Scene;
  x: Scale;
  y: Scale;
  plot: { x0: number; y0: number; x1: number; y1: number };
}

/** Axes, tick marks, labels, and frame box for one plot region. */
export function makeFrame(opts: {
  width: number;
  height: number;
  margin?: { l: number; r: number; t: number; b: number };
  xDomain: [number, number];
  yDomain: [number, number];
  xLog?: boolean;
  yLog?: boolean;
  title: string;
  xLabel: string;
  yLabel: string;
}): Frame {
  const m = opts.margin ?? { l: 64, r: 16, t: 28, b: 44 };
  const plot = { x0: m.l, y0: m.t, x1: opts.width - m.r, y1: opts.height - m.b };
  const mk = (log: boolean | undefined, domain: [number, number], range: [number, number]) =>
    log ? logScale(domain, range) : linearScale(domain, range);
  const x = mk(opts.xLog, opts.xDomain, [plot.x0, plot.x1]);
  const y = mk(opts.yLog, opts.yDomain, [plot.y1, plot.y0]);
  const items: Item[] = [];
  items.push({ kind: "rect", x: 0, y: 0, w: opts.width, h: opts.height, fill: "#ffffff" });
  const xTicks = x.log
    ? ticks([Math.log10(opts.xDomain[0]), Math.log10(opts.xDomain[1])], 5).map((t) => Math.pow(10, t))
    : ticks(opts.xDomain, 6);
  const yTicks = y.log
    ? ticks([Math.log10(opts.yDomain[0]), Math.log10(opts.yDomain[1])], 5).map((t) => Math.pow(10, t))
    : ticks(opts.yDomain, 5);
  for (const t of xTicks) {
    const px = x.map(t);
    if (px < plot.x0 - 0.5 || px > plot.x1 + 0.5) continue;
    items.push({ kind: "line", x1: px, y1: plot.y0, x2: px, y2: plot.y1, stroke: PALETTE.grid, width: 1 });
    items.push({ kind: "line", x1: px, y1: plot.y1, x2: px, y2: plot.y1 + 4, stroke: PALETTE.axis, width: 1 });
    items.push({ kind: "text", x: px, y: plot.y1 + 16, text: fmtTick(t), size: 10, anchor: "middle" });
  }
  for (const t of yTicks) {
    const py = y.map(t);
    if (py < plot.y0 - 0.5 || py > plot.y1 + 0.5) continue;
    items.push({ kind: "line", x1: plot.x0, y1: py, x2: plot.x1, y2: py, stroke: PALETTE.grid, width: 1 });
    items.push({ kind: "line", x1: plot.x0 - 4, y1: py, x2: plot.x0, y2: py, stroke: PALETTE.axis, width: 1 });
    items.push({ kind: "text", x: plot.x0 - 6, y: py + 3, text: fmtTick(t), size: 10, anchor: "end" });
  }
  // frame box
  items.push({ kind: "line", x1: plot.x0, y1: plot.y1, x2: plot.x1, y2: plot.y1, stroke: PALETTE.axis, width: 1 });
  items.push({ kind: "line", x1: plot.x0, y1: plot.y0, x2: plot.x0, y2: plot.y1, stroke: PALETTE.axis, width: 1 });
  items.push({ kind: "text", x: (plot.x0 + plot.x1) / 2, y: 16, text: opts.title, size: 12, anchor: "middle" });
  items.push({ kind: "text", x: (plot.x0 + plot.x1) / 2, y: opts.height - 10, text: opts.xLabel, size: 11, anchor: "middle" });
  items.push({ kind: "text", x: 14, y: plot.y0 - 8, text: opts.yLabel, size: 11, anchor: "start" });
  return { scene: { width: opts.width, height: opts.height, items }, x, y, plot };
}

export function polyline(
  frame: Frame,
  xs: number[],
  ys: number[],
  stroke: string,
  width = 1.5,
): void {
  const pts: Array<[number, number]> = [];
  for (let i = 0; i < xs.length; i++) {
    if (Number.isNaN(xs[i]) || Number.isNaN(ys[i])) continue;
    pts.push([frame.x.map(xs[i]), frame.y.map(ys[i])]);
  }
  frame.scene.items.push({ kind: "polyline", points: pts, stroke, width });
}

export function markers(
  frame: Frame,
  xs: number[],
  ys: number[],
  fill: string,
  r = 3,
): void {
  for (let i = 0; i < xs.length; i++) {
    if (Number.isNaN(xs[i]) || Number.isNaN(ys[i])) continue;
    frame.scene.items.push({ kind: "circle", cx: frame.x.map(xs[i]), cy: frame.y.map(ys[i]), r, fill });
  }
}

export function legend(frame: Frame, entries: Array<[string, string]>): void {
  let y = frame.plot.y0 + 14;
  for (const [label, color] of entries) {
    frame.scene.items.push({
      kind: "line", x1: frame.plot.x0 + 10, y1: y - 3, x2: frame.plot.x0 + 30, y2: y - 3,
      stroke: color, width: 2,
    });
    frame.scene.items.push({
      kind: "text", x: frame.plot.x0 + 36, y, text: label, size: 10, anchor: "start",
    });
    y += 14;
  }
}
