/**
 * Scene-to-PNG renderer: a small deterministic rasterizer (Bresenham lines
 * with dash support, markers, 5x7 bitmap text) plus a minimal PNG encoder
 * (8-bit RGBA, filter 0, fixed-level zlib).  No timestamps, no ancillary
 * chunks, so identical scenes give identical bytes.
 */

import { deflateSync } from "node:zlib";

import { GLYPH_HEIGHT, GLYPH_WIDTH, glyphFor } from "./font5x7.js";
import type { Primitive, Scene } from "./scene.js";

function parseColor(c: string): [number, number, number] {
  const m = /^#([0-9a-fA-F]{6})$/.exec(c);
  if (!m) throw new Error(`unsupported color ${JSON.stringify(c)}`);
  const v = parseInt(m[1], 16);
  return [(v >> 16) & 0xff, (v >> 8) & 0xff, v & 0xff];
}

export class Raster {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8Array;

  constructor(width: number, height: number) {
    this.width = width;
    this.height = height;
    this.data = new Uint8Array(width * height * 4).fill(255);
  }

  set(x: number, y: number, rgb: [number, number, number]): void {
    const xi = Math.round(x);
    const yi = Math.round(y);
    if (xi < 0 || yi < 0 || xi >= this.width || yi >= this.height) return;
    const o = (yi * this.width + xi) * 4;
    this.data[o] = rgb[0];
    this.data[o + 1] = rgb[1];
    this.data[o + 2] = rgb[2];
    this.data[o + 3] = 255;
  }

  fillRect(x: number, y: number, w: number, h: number, rgb: [number, number, number]): void {
    for (let yy = Math.max(0, Math.round(y)); yy < Math.min(this.height, Math.round(y + h)); yy++) {
      for (let xx = Math.max(0, Math.round(x)); xx < Math.min(this.width, Math.round(x + w)); xx++) {
        this.set(xx, yy, rgb);
      }
    }
  }

  /** Bresenham segment with an on/off dash pattern tracked across pixels. */
  line(
    x0: number, y0: number, x1: number, y1: number,
    rgb: [number, number, number], dash?: number[], phase = 0,
  ): number {
    let xi = Math.round(x0);
    let yi = Math.round(y0);
    const xe = Math.round(x1);
    const ye = Math.round(y1);
    const dx = Math.abs(xe - xi);
    const dy = -Math.abs(ye - yi);
    const sx = xi < xe ? 1 : -1;
    const sy = yi < ye ? 1 : -1;
    let err = dx + dy;
    const period = dash ? dash[0] + dash[1] : 0;
    for (;;) {
      const on = !dash || phase % period < dash[0];
      if (on) this.set(xi, yi, rgb);
      phase += 1;
      if (xi === xe && yi === ye) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        xi += sx;
      }
      if (e2 <= dx) {
        err += dx;
        yi += sy;
      }
    }
    return phase;
  }

  text(
    x: number, y: number, s: string, rgb: [number, number, number],
    scale: number, anchor: "start" | "middle" | "end", rotate?: -90,
  ): void {
    const up = s.toUpperCase();
    const adv = (GLYPH_WIDTH + 1) * scale;
    const total = up.length * adv - scale;
    let ox: number;
    if (anchor === "middle") ox = -total / 2;
    else if (anchor === "end") ox = -total;
    else ox = 0;
    // baseline: glyph boxes hang above the anchor like SVG text
    const oy = -GLYPH_HEIGHT * scale;
    for (let i = 0; i < up.length; i++) {
      const cols = glyphFor(up[i]);
      for (let cx = 0; cx < GLYPH_WIDTH; cx++) {
        for (let cy = 0; cy < GLYPH_HEIGHT; cy++) {
          if (((cols[cx] >> cy) & 1) === 0) continue;
          for (let fx = 0; fx < scale; fx++) {
            for (let fy = 0; fy < scale; fy++) {
              const gx = ox + i * adv + cx * scale + fx;
              const gy = oy + cy * scale + fy + scale;
              // rotate(-90) about the anchor in y-down coords: (u,v) -> (v,-u)
              if (rotate === -90) this.set(x + gy, y - gx, rgb);
              else this.set(x + gx, y + gy, rgb);
            }
          }
        }
      }
    }
  }

  marker(x: number, y: number, shape: string, rgb: [number, number, number], r: number): void {
    switch (shape) {
      case "circle": {
        const n = 24;
        for (let k = 0; k < n; k++) {
          const a0 = (2 * Math.PI * k) / n;
          const a1 = (2 * Math.PI * (k + 1)) / n;
          this.line(x + r * Math.cos(a0), y + r * Math.sin(a0), x + r * Math.cos(a1), y + r * Math.sin(a1), rgb);
        }
        break;
      }
      case "square":
        this.line(x - r, y - r, x + r, y - r, rgb);
        this.line(x + r, y - r, x + r, y + r, rgb);
        this.line(x + r, y + r, x - r, y + r, rgb);
        this.line(x - r, y + r, x - r, y - r, rgb);
        break;
      case "cross":
        this.line(x - r, y - r, x + r, y + r, rgb);
        this.line(x - r, y + r, x + r, y - r, rgb);
        break;
      case "star":
        for (let k = 0; k < 5; k++) {
          const a = -Math.PI / 2 + (2 * Math.PI * k) / 5;
          this.line(x, y, x + 1.3 * r * Math.cos(a), y + 1.3 * r * Math.sin(a), rgb);
        }
        break;
    }
  }
}

export function rasterize(scene: Scene, scale = 1): Raster {
  const r = new Raster(scene.width * scale, scene.height * scale);
  const S = (v: number) => v * scale;
  for (const p of scene.primitives as Primitive[]) {
    switch (p.kind) {
      case "rect":
        r.fillRect(S(p.x), S(p.y), S(p.w), S(p.h), parseColor(p.fill));
        break;
      case "line": {
        const rgb = parseColor(p.color);
        const dash = p.dash ? [p.dash[0] * scale, p.dash[1] * scale] : undefined;
        let phase = 0;
        for (let i = 0; i + 1 < p.points.length; i++) {
          phase = r.line(
            S(p.points[i][0]), S(p.points[i][1]),
            S(p.points[i + 1][0]), S(p.points[i + 1][1]),
            rgb, dash, phase,
          );
        }
        break;
      }
      case "marker":
        r.marker(S(p.x), S(p.y), p.shape, parseColor(p.color), p.size * scale);
        break;
      case "text": {
        const textScale = Math.max(1, Math.round((p.size / 9) * scale));
        r.text(S(p.x), S(p.y), p.text, parseColor(p.color), textScale, p.anchor, p.rotate);
        break;
      }
    }
  }
  return r;
}

// --- PNG encoding -----------------------------------------------------------

const CRC_TABLE = (() => {
  const t = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    t[n] = c >>> 0;
  }
  return t;
})();

export function crc32(buf: Uint8Array): number {
  let c = 0xffffffff;
  for (let i = 0; i < buf.length; i++) {
    c = CRC_TABLE[(c ^ buf[i]) & 0xff] ^ (c >>> 8);
  }
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, payload: Uint8Array): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(payload.length, 0);
  head.write(type, 4, "ascii");
  const body = Buffer.concat([Buffer.from(type, "ascii"), Buffer.from(payload)]);
  const tail = Buffer.alloc(4);
  tail.writeUInt32BE(crc32(body), 0);
  return Buffer.concat([head, Buffer.from(payload), tail]);
}

export function encodePng(raster: Raster): Buffer {
  const { width, height, data } = raster;
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 6; // RGBA
  ihdr[10] = 0;
  ihdr[11] = 0;
  ihdr[12] = 0;
  const stride = width * 4;
  const raw = Buffer.alloc((stride + 1) * height);
  for (let y = 0; y < height; y++) {
    raw[y * (stride + 1)] = 0; // filter type 0
    raw.set(data.subarray(y * stride, (y + 1) * stride), y * (stride + 1) + 1);
  }
  const idat = deflateSync(raw, { level: 9 });
  return Buffer.concat([
    Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    chunk("IHDR", ihdr),
    chunk("IDAT", idat),
    chunk("IEND", new Uint8Array(0)),
  ]);
}

export function renderPng(scene: Scene, scale = 1): Buffer {
  return encodePng(rasterize(scene, scale));
}
