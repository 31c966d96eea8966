import { inflateSync } from "node:zlib";
import { describe, expect, it } from "vitest";

import { GLYPHS, GLYPH_WIDTH } from "../src/font5x7.js";
import { Raster, crc32, encodePng, rasterize } from "../src/png.js";
import { chartScene } from "../src/scene.js";

function chunks(buf: Buffer): { type: string; data: Buffer; crc: number }[] {
  const out = [];
  let o = 8;
  while (o < buf.length) {
    const len = buf.readUInt32BE(o);
    const type = buf.subarray(o + 4, o + 8).toString("ascii");
    const data = buf.subarray(o + 8, o + 8 + len);
    const crc = buf.readUInt32BE(o + 8 + len);
    out.push({ type, data: Buffer.from(data), crc });
    o += 12 + len;
  }
  return out;
}

function demoScene() {
  return chartScene({
    xLabel: "time steps",
    yLabel: "arrival probability",
    series: [
      {
        label: "demo",
        x: [0, 1, 2, 3, 4],
        y: [0, 0.2, 0.1, 0.7, 1.0],
        style: { color: "#2ca02c", dash: [6, 4], marker: "circle" },
      },
    ],
  });
}

describe("png encoder", () => {
  it("emits a structurally valid PNG with correct CRCs", () => {
    const png = encodePng(rasterize(demoScene()));
    expect(png.subarray(0, 8)).toEqual(
      Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    );
    const cs = chunks(png);
    expect(cs.map((c) => c.type)).toEqual(["IHDR", "IDAT", "IEND"]);
    const ihdr = cs[0].data;
    const width = ihdr.readUInt32BE(0);
    const height = ihdr.readUInt32BE(4);
    expect(width).toBe(720);
    expect(height).toBe(480);
    for (const c of cs) {
      const body = Buffer.concat([Buffer.from(c.type, "ascii"), c.data]);
      expect(crc32(body)).toBe(c.crc);
    }
    const raw = inflateSync(cs[1].data);
    expect(raw.length).toBe(height * (1 + 4 * width));
    for (let y = 0; y < height; y++) {
      expect(raw[y * (1 + 4 * width)]).toBe(0); // filter type 0 per scanline
    }
  });

  it("draws ink: the raster is not blank", () => {
    const r = rasterize(demoScene());
    let colored = 0;
    for (let i = 0; i < r.data.length; i += 4) {
      if (r.data[i] !== 255 || r.data[i + 1] !== 255 || r.data[i + 2] !== 255) colored++;
    }
    expect(colored).toBeGreaterThan(500);
  });

  it("dashes leave gaps", () => {
    const solid = new Raster(100, 10);
    solid.line(0, 5, 99, 5, [0, 0, 0]);
    const dashed = new Raster(100, 10);
    dashed.line(0, 5, 99, 5, [0, 0, 0], [4, 4]);
    const inked = (r: Raster) => {
      let n = 0;
      for (let i = 0; i < r.data.length; i += 4) if (r.data[i] === 0) n++;
      return n;
    };
    expect(inked(solid)).toBe(100);
    expect(inked(dashed)).toBeGreaterThan(30);
    expect(inked(dashed)).toBeLessThan(70);
  });
});

describe("bitmap font", () => {
  it("has well-formed glyphs", () => {
    for (const [ch, cols] of Object.entries(GLYPHS)) {
      expect(cols.length, ch).toBe(GLYPH_WIDTH);
      for (const c of cols) {
        expect(c).toBeGreaterThanOrEqual(0);
        expect(c).toBeLessThan(128); // 7 rows only
      }
    }
  });

  it("covers the label alphabet with distinct bitmaps", () => {
    for (const ch of "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ.,-%()=/:") {
      expect(GLYPHS[ch], ch).toBeDefined();
    }
    const seen = new Map<string, string>();
    for (const [ch, cols] of Object.entries(GLYPHS)) {
      const key = cols.join(",");
      expect(seen.has(key), `${ch} duplicates ${seen.get(key)}`).toBe(false);
      seen.set(key, ch);
    }
  });
});
