/**
 * Curve styling keyed on label keywords, mirroring the figure conventions:
 * zig-zag green, armchair red, cycle blue, classical black; Grover coins
 * green, Fourier coins turquoise, the Hadamard pair yellow-green.
 */

import type { CurveStyle, MarkerShape } from "./scene.js";

const FALLBACK = ["#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

export function styleFor(label: string, index: number): CurveStyle {
  const l = label.toLowerCase();
  const dash = l.includes("dashed") ? [6, 4] : undefined;
  if (l.includes("classical")) {
    const dotted = l.includes("3sided") || l.includes("3-sided");
    const dashed = l.includes("4sided") || l.includes("4-sided");
    return {
      color: "#000000",
      dash: dotted ? [2, 3] : dashed ? [6, 4] : undefined,
    };
  }
  if (l.includes("zigzag") || l.includes("zig-zag")) {
    const capped = l.includes("capped");
    return { color: capped ? "#166916" : "#2ca02c", dash, marker: markerFor(l) };
  }
  if (l.includes("armchair")) {
    const capped = l.includes("capped");
    return { color: capped ? "#8f1d1e" : "#d62728", dash, marker: markerFor(l) };
  }
  if (l.includes("cycle")) {
    return { color: "#1f77b4", dash, marker: markerFor(l) };
  }
  if (/\bg\d/.test(l) || l.includes("grover")) {
    return { color: "#2ca02c", dash: l.includes("g4") ? [6, 4] : undefined };
  }
  if (/\bf\d/.test(l) || l.includes("fourier")) {
    return { color: "#17becf", dash: l.includes("f4") ? [6, 4] : undefined };
  }
  if (l.includes("hxh")) {
    return { color: "#bcbd22", dash: [6, 4] };
  }
  if (l.includes("_h_") || l === "h" || l.startsWith("h ")) {
    return { color: "#1f77b4" };
  }
  return { color: FALLBACK[index % FALLBACK.length] };
}

function markerFor(label: string): MarkerShape | undefined {
  if (label.includes("cycle")) return "star";
  if (label.includes("zigzag") || label.includes("zig-zag")) return "circle";
  if (label.includes("armchair")) return "square";
  return undefined;
}

/** Scatter markers for the scaling figure, by structure-family name. */
export function scatterStyle(structure: string): CurveStyle {
  const base = styleFor(structure, 0);
  return {
    color: base.color,
    marker: markerFor(structure.toLowerCase()) ?? "cross",
  };
}
