/**
 * Parsers for the simulator's CSV schemas.
 *
 * Transport records:  step,arrival,avg_level   (one row per step from 0)
 * Fit tables:         structure,m,b,r2
 * Sweep points:       structure,levels,n_half
 */

export interface TransportSeries {
  steps: number[];
  arrival: number[];
  avgLevel: number[];
}

export interface FitRow {
  structure: string;
  m: number;
  b: number;
  r2: number;
}

export interface ScalingPoint {
  structure: string;
  levels: number;
  nHalf: number;
}

function rows(text: string, source: string): string[][] {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length < 2) {
    throw new Error(`${source}: empty or header-only CSV`);
  }
  return lines.map((l) => l.split(","));
}

function num(field: string, source: string, line: number): number {
  const v = Number(field);
  if (!Number.isFinite(v)) {
    throw new Error(`${source}: non-numeric field ${JSON.stringify(field)} on line ${line}`);
  }
  return v;
}

export function parseTransportCsv(text: string, source = "<csv>"): TransportSeries {
  const r = rows(text, source);
  if (r[0].join(",") !== "step,arrival,avg_level") {
    throw new Error(`${source}: expected header step,arrival,avg_level, got ${r[0].join(",")}`);
  }
  const steps: number[] = [];
  const arrival: number[] = [];
  const avgLevel: number[] = [];
  for (let i = 1; i < r.length; i++) {
    if (r[i].length !== 3) {
      throw new Error(`${source}: expected 3 fields on line ${i + 1}`);
    }
    const t = num(r[i][0], source, i + 1);
    if (t !== i - 1) {
      throw new Error(`${source}: non-contiguous step column at line ${i + 1}`);
    }
    steps.push(t);
    arrival.push(num(r[i][1], source, i + 1));
    avgLevel.push(num(r[i][2], source, i + 1));
  }
  return { steps, arrival, avgLevel };
}

export function parseFitCsv(text: string, source = "<csv>"): FitRow[] {
  const r = rows(text, source);
  if (r[0].join(",") !== "structure,m,b,r2") {
    throw new Error(`${source}: expected header structure,m,b,r2, got ${r[0].join(",")}`);
  }
  return r.slice(1).map((f, i) => {
    if (f.length !== 4) throw new Error(`${source}: expected 4 fields on line ${i + 2}`);
    return {
      structure: f[0],
      m: num(f[1], source, i + 2),
      b: num(f[2], source, i + 2),
      r2: num(f[3], source, i + 2),
    };
  });
}

export function parsePointsCsv(text: string, source = "<csv>"): ScalingPoint[] {
  const r = rows(text, source);
  if (r[0].join(",") !== "structure,levels,n_half") {
    throw new Error(`${source}: expected header structure,levels,n_half, got ${r[0].join(",")}`);
  }
  return r.slice(1).map((f, i) => {
    if (f.length !== 3) throw new Error(`${source}: expected 3 fields on line ${i + 2}`);
    return {
      structure: f[0],
      levels: num(f[1], source, i + 2),
      nHalf: num(f[2], source, i + 2),
    };
  });
}
