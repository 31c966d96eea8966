/**
 * Figure builders: arrival-probability curves from transport CSVs and the
 * scaling scatter with dashed fit lines from the sweep outputs.  Both return
 * SVG text and PNG bytes rendered from one shared scene, and both are
 * deterministic for identical inputs.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";

import { parseFitCsv, parsePointsCsv, parseTransportCsv } from "./csv.js";
import { chartScene, type Series } from "./scene.js";
import { renderPng } from "./png.js";
import { renderSvg } from "./svg.js";
import { scatterStyle, styleFor } from "./style.js";

export interface CurveSpec {
  path: string;
  label?: string;
}

export interface FigureSpec {
  curves: CurveSpec[];
  title?: string;
  xLabel?: string;
  yLabel?: string;
}

export interface RenderedFigure {
  svg: string;
  png: Buffer;
}

function readCsv(path: string): string {
  try {
    return readFileSync(path, "utf8");
  } catch (err) {
    throw new Error(`cannot read CSV ${path}: ${(err as Error).message}`);
  }
}

function defaultLabel(path: string): string {
  return basename(path).replace(/\.csv$/, "");
}

export function plotArrival(spec: FigureSpec): RenderedFigure {
  if (spec.curves.length === 0) {
    throw new Error("figure spec lists no curves");
  }
  const series: Series[] = spec.curves.map((c, i) => {
    const label = c.label ?? defaultLabel(c.path);
    const data = parseTransportCsv(readCsv(c.path), c.path);
    return { label, x: data.steps, y: data.arrival, style: styleFor(label, i) };
  });
  const scene = chartScene({
    title: spec.title,
    xLabel: spec.xLabel ?? "time steps",
    yLabel: spec.yLabel ?? "arrival probability",
    series,
  });
  return { svg: renderSvg(scene), png: renderPng(scene) };
}

export function plotScaling(
  pointsPath: string,
  fitsPath: string,
  title?: string,
): RenderedFigure {
  const points = parsePointsCsv(readCsv(pointsPath), pointsPath);
  const fits = parseFitCsv(readCsv(fitsPath), fitsPath);
  const pointStructures = new Set(points.map((p) => p.structure));
  const fitStructures = new Set(fits.map((f) => f.structure));
  for (const s of pointStructures) {
    if (!fitStructures.has(s)) {
      throw new Error(`structure ${JSON.stringify(s)} has points but no fit row`);
    }
  }
  for (const s of fitStructures) {
    if (!pointStructures.has(s)) {
      throw new Error(`structure ${JSON.stringify(s)} has a fit row but no points`);
    }
  }

  const series: Series[] = [];
  for (const fit of fits) {
    const mine = points.filter((p) => p.structure === fit.structure);
    if (mine.length < 2) {
      throw new Error(
        `structure ${JSON.stringify(fit.structure)} has ${mine.length} point(s); no fit line possible`,
      );
    }
    const style = scatterStyle(fit.structure);
    series.push({
      label: fit.structure,
      x: mine.map((p) => p.levels),
      y: mine.map((p) => p.nHalf),
      style,
      line: false,
    });
    const xs = mine.map((p) => p.levels);
    const x0 = Math.min(...xs);
    const x1 = Math.max(...xs);
    series.push({
      label: `${fit.structure} fit`,
      x: [x0, x1],
      y: [fit.m * x0 + fit.b, fit.m * x1 + fit.b],
      style: { color: style.color, dash: [6, 4] },
      legendEntry: false,
    });
  }
  const scene = chartScene({
    title,
    xLabel: "number of levels",
    yLabel: "steps until 50% arrival",
    series,
  });
  return { svg: renderSvg(scene), png: renderPng(scene) };
}

export function writeFigure(fig: RenderedFigure, outBase: string): string[] {
  const svgPath = `${outBase}.svg`;
  const pngPath = `${outBase}.png`;
  writeFileSync(svgPath, fig.svg);
  writeFileSync(pngPath, fig.png);
  return [svgPath, pngPath];
}
