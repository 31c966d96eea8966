/**
 * Device-independent figure description: a list of drawing primitives in
 * pixel coordinates plus the chart builder that lays out axes, ticks,
 * curves, scatter markers and the legend.  SVG and PNG renderers consume
 * the same scene, which keeps the two outputs in lockstep.
 */

export type MarkerShape = "circle" | "square" | "cross" | "star";

export interface CurveStyle {
  color: string;
  dash?: number[];
  marker?: MarkerShape;
}

export type Primitive =
  | { kind: "rect"; x: number; y: number; w: number; h: number; fill: string }
  | {
      kind: "line";
      points: [number, number][];
      color: string;
      width: number;
      dash?: number[];
    }
  | { kind: "marker"; x: number; y: number; shape: MarkerShape; color: string; size: number }
  | {
      kind: "text";
      x: number;
      y: number;
      text: string;
      size: number;
      color: string;
      anchor: "start" | "middle" | "end";
      rotate?: -90;
    };

export interface Scene {
  width: number;
  height: number;
  primitives: Primitive[];
}

export interface Series {
  label: string;
  x: number[];
  y: number[];
  style: CurveStyle;
  /** draw connecting line (default true); scatter-only series set it false */
  line?: boolean;
  /** include in the legend (default true) */
  legendEntry?: boolean;
}

export interface ChartOptions {
  title?: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  legend?: boolean;
  width?: number;
  height?: number;
}

/** Round tick spacing to a 1/2/5 decade multiple covering roughly n steps. */
export function niceTicks(min: number, max: number, n = 5): number[] {
  if (!(max > min)) {
    max = min + 1;
  }
  const raw = (max - min) / n;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  const step = (norm < 1.5 ? 1 : norm < 3.5 ? 2 : norm < 7.5 ? 5 : 10) * mag;
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + 1e-9 * step; v += step) {
    ticks.push(Math.abs(v) < 1e-12 ? 0 : v);
  }
  return ticks;
}

export function formatTick(v: number): string {
  if (Number.isInteger(v)) return String(v);
  const s = v.toPrecision(3);
  return String(Number(s));
}

const MARGIN = { left: 64, right: 16, top: 28, bottom: 46 };

export function chartScene(opts: ChartOptions): Scene {
  const width = opts.width ?? 720;
  const height = opts.height ?? 480;
  const prims: Primitive[] = [];
  prims.push({ kind: "rect", x: 0, y: 0, w: width, h: height, fill: "#ffffff" });

  if (opts.series.length === 0) {
    throw new Error("figure needs at least one series");
  }
  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const s of opts.series) {
    if (s.x.length !== s.y.length || s.x.length === 0) {
      throw new Error(`series ${JSON.stringify(s.label)} is empty or ragged`);
    }
    for (const v of s.x) {
      xMin = Math.min(xMin, v);
      xMax = Math.max(xMax, v);
    }
    for (const v of s.y) {
      yMin = Math.min(yMin, v);
      yMax = Math.max(yMax, v);
    }
  }
  if (yMin > 0 && yMin < 0.25 * (yMax - yMin)) yMin = 0; // anchor probability-like axes
  if (xMax === xMin) xMax = xMin + 1;
  if (yMax === yMin) yMax = yMin + 1;

  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const px = (v: number) => MARGIN.left + ((v - xMin) / (xMax - xMin)) * plotW;
  const py = (v: number) => MARGIN.top + plotH - ((v - yMin) / (yMax - yMin)) * plotH;

  // frame and ticks
  const axisColor = "#000000";
  prims.push({
    kind: "line",
    points: [
      [MARGIN.left, MARGIN.top],
      [MARGIN.left, MARGIN.top + plotH],
      [MARGIN.left + plotW, MARGIN.top + plotH],
      [MARGIN.left + plotW, MARGIN.top],
      [MARGIN.left, MARGIN.top],
    ],
    color: axisColor,
    width: 1,
  });
  for (const t of niceTicks(xMin, xMax)) {
    if (t < xMin - 1e-9 || t > xMax + 1e-9) continue;
    const x = px(t);
    const y0 = MARGIN.top + plotH;
    prims.push({ kind: "line", points: [[x, y0], [x, y0 + 5]], color: axisColor, width: 1 });
    prims.push({
      kind: "text", x, y: y0 + 18, text: formatTick(t), size: 11,
      color: axisColor, anchor: "middle",
    });
  }
  for (const t of niceTicks(yMin, yMax)) {
    if (t < yMin - 1e-9 || t > yMax + 1e-9) continue;
    const y = py(t);
    prims.push({
      kind: "line", points: [[MARGIN.left - 5, y], [MARGIN.left, y]],
      color: axisColor, width: 1,
    });
    prims.push({
      kind: "text", x: MARGIN.left - 8, y: y + 4, text: formatTick(t), size: 11,
      color: axisColor, anchor: "end",
    });
  }
  prims.push({
    kind: "text", x: MARGIN.left + plotW / 2, y: height - 12, text: opts.xLabel,
    size: 13, color: axisColor, anchor: "middle",
  });
  prims.push({
    kind: "text", x: 16, y: MARGIN.top + plotH / 2, text: opts.yLabel,
    size: 13, color: axisColor, anchor: "middle", rotate: -90,
  });
  if (opts.title) {
    prims.push({
      kind: "text", x: MARGIN.left + plotW / 2, y: 18, text: opts.title,
      size: 14, color: axisColor, anchor: "middle",
    });
  }

  // curves and markers
  for (const s of opts.series) {
    const pts: [number, number][] = s.x.map((v, i) => [px(v), py(s.y[i])]);
    if (s.line !== false) {
      prims.push({
        kind: "line", points: pts, color: s.style.color, width: 1.6, dash: s.style.dash,
      });
    }
    if (s.style.marker) {
      const every = s.line === false ? 1 : Math.max(1, Math.floor(pts.length / 30));
      for (let i = 0; i < pts.length; i += every) {
        prims.push({
          kind: "marker", x: pts[i][0], y: pts[i][1],
          shape: s.style.marker, color: s.style.color, size: 4,
        });
      }
    }
  }

  if (opts.legend !== false) {
    const x0 = MARGIN.left + plotW - 8;
    let y = MARGIN.top + 14;
    for (const s of opts.series.filter((s) => s.legendEntry !== false)) {
      prims.push({
        kind: "line",
        points: [[x0 - 150, y - 4], [x0 - 118, y - 4]],
        color: s.style.color, width: 1.6, dash: s.style.dash,
      });
      if (s.style.marker) {
        prims.push({
          kind: "marker", x: x0 - 134, y: y - 4, shape: s.style.marker,
          color: s.style.color, size: 4,
        });
      }
      prims.push({
        kind: "text", x: x0 - 112, y, text: s.label, size: 11,
        color: "#000000", anchor: "start",
      });
      y += 16;
    }
  }

  return { width, height, primitives: prims };
}
