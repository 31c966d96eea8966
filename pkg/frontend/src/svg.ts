/** Scene-to-SVG renderer.  Output is fully deterministic: fixed attribute
 * order, fixed 2-decimal coordinates, no timestamps or generator comments. */

import type { Primitive, Scene } from "./scene.js";

const fmt = (v: number): string => {
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
};

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function markerPath(p: Extract<Primitive, { kind: "marker" }>): string {
  const { x, y, size: r, color } = p;
  switch (p.shape) {
    case "circle":
      return `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${fmt(r)}" fill="none" stroke="${color}" stroke-width="1.2"/>`;
    case "square":
      return `<rect x="${fmt(x - r)}" y="${fmt(y - r)}" width="${fmt(2 * r)}" height="${fmt(2 * r)}" fill="none" stroke="${color}" stroke-width="1.2"/>`;
    case "cross":
      return (
        `<path d="M ${fmt(x - r)} ${fmt(y - r)} L ${fmt(x + r)} ${fmt(y + r)} ` +
        `M ${fmt(x - r)} ${fmt(y + r)} L ${fmt(x + r)} ${fmt(y - r)}" stroke="${color}" stroke-width="1.2" fill="none"/>`
      );
    case "star": {
      const pts: string[] = [];
      for (let k = 0; k < 10; k++) {
        const rr = k % 2 === 0 ? r * 1.3 : r * 0.55;
        const a = -Math.PI / 2 + (k * Math.PI) / 5;
        pts.push(`${fmt(x + rr * Math.cos(a))},${fmt(y + rr * Math.sin(a))}`);
      }
      return `<polygon points="${pts.join(" ")}" fill="${color}" stroke="none"/>`;
    }
  }
}

export function renderSvg(scene: Scene): string {
  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${scene.width}" height="${scene.height}" ` +
      `viewBox="0 0 ${scene.width} ${scene.height}">`,
  );
  for (const p of scene.primitives) {
    switch (p.kind) {
      case "rect":
        out.push(
          `<rect x="${fmt(p.x)}" y="${fmt(p.y)}" width="${fmt(p.w)}" height="${fmt(p.h)}" fill="${p.fill}"/>`,
        );
        break;
      case "line": {
        const pts = p.points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
        const dash = p.dash ? ` stroke-dasharray="${p.dash.join(" ")}"` : "";
        out.push(
          `<polyline points="${pts}" fill="none" stroke="${p.color}" stroke-width="${p.width}"${dash}/>`,
        );
        break;
      }
      case "marker":
        out.push(markerPath(p));
        break;
      case "text": {
        const rot = p.rotate ? ` transform="rotate(${p.rotate} ${fmt(p.x)} ${fmt(p.y)})"` : "";
        out.push(
          `<text x="${fmt(p.x)}" y="${fmt(p.y)}" font-family="Helvetica, Arial, sans-serif" ` +
            `font-size="${p.size}" fill="${p.color}" text-anchor="${anchor(p.anchor)}"${rot}>${esc(p.text)}</text>`,
        );
        break;
      }
    }
  }
  out.push("</svg>");
  return out.join("\n") + "\n";
}

function anchor(a: "start" | "middle" | "end"): string {
  return a;
}
