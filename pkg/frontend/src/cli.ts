#!/usr/bin/env node
/**
 * Figure regeneration from simulator CSVs.
 *
 *   qwcarbon-plot arrival --out FIG --csv path[:label] [--csv ...] [--title T]
 *   qwcarbon-plot scaling --points scaling_points.csv --fits scaling_fits.csv --out FIG
 *
 * FIG is a base path; FIG.svg and FIG.png are written.
 */

import { plotArrival, plotScaling, writeFigure, type CurveSpec } from "./plots.js";

function fail(msg: string): never {
  process.stderr.write(`error: ${msg}\n`);
  process.exit(1);
}

function parseArgs(argv: string[]): { flags: Map<string, string[]>; positional: string[] } {
  const flags = new Map<string, string[]>();
  const positional: string[] = [];
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a.startsWith("--")) {
      const key = a.slice(2);
      const val = argv[++i];
      if (val === undefined) fail(`flag --${key} needs a value`);
      const list = flags.get(key) ?? [];
      list.push(val);
      flags.set(key, list);
    } else {
      positional.push(a);
    }
  }
  return { flags, positional };
}

function single(flags: Map<string, string[]>, key: string): string | undefined {
  const v = flags.get(key);
  if (v && v.length > 1) fail(`flag --${key} given more than once`);
  return v?.[0];
}

export function main(argv: string[]): void {
  const [command, ...rest] = argv;
  const { flags, positional } = parseArgs(rest);
  if (positional.length > 0) fail(`unexpected argument ${positional[0]}`);

  if (command === "arrival") {
    const out = single(flags, "out") ?? fail("arrival needs --out");
    const curves: CurveSpec[] = (flags.get("csv") ?? []).map((entry) => {
      const idx = entry.lastIndexOf(":");
      if (idx > 1 && !entry.slice(idx + 1).includes("/")) {
        return { path: entry.slice(0, idx), label: entry.slice(idx + 1) };
      }
      return { path: entry };
    });
    try {
      const fig = plotArrival({ curves, title: single(flags, "title") });
      for (const p of writeFigure(fig, out)) process.stdout.write(p + "\n");
    } catch (err) {
      fail((err as Error).message);
    }
    return;
  }

  if (command === "scaling") {
    const out = single(flags, "out") ?? fail("scaling needs --out");
    const points = single(flags, "points") ?? fail("scaling needs --points");
    const fits = single(flags, "fits") ?? fail("scaling needs --fits");
    try {
      const fig = plotScaling(points, fits, single(flags, "title"));
      for (const p of writeFigure(fig, out)) process.stdout.write(p + "\n");
    } catch (err) {
      fail((err as Error).message);
    }
    return;
  }

  fail(`unknown command ${JSON.stringify(command ?? "")}; expected arrival or scaling`);
}

main(process.argv.slice(2));
