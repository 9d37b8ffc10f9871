/**
 * SVG geometry for curve plots. Scales service-provided points into a
 * viewport; the fragility median marker is the service sample sitting
 * at (or first reaching) the 0.5 crossing.
 */

import type { CurvePoint } from "./types.js";

export interface PlotGeometry {
  width: number;
  height: number;
  padding: number;
}

export interface PlotScale {
  xMax: number;
  yMax: number;
}

export function plotScale(points: CurvePoint[]): PlotScale {
  let xMax = 0;
  let yMax = 0;
  for (const p of points) {
    xMax = Math.max(xMax, p.x);
    yMax = Math.max(yMax, p.y);
  }
  return { xMax: xMax || 1, yMax: yMax || 1 };
}

export function toPixel(
  point: CurvePoint,
  scale: PlotScale,
  geom: PlotGeometry,
): { px: number; py: number } {
  const innerWidth = geom.width - 2 * geom.padding;
  const innerHeight = geom.height - 2 * geom.padding;
  return {
    px: geom.padding + (point.x / scale.xMax) * innerWidth,
    py: geom.height - geom.padding - (point.y / scale.yMax) * innerHeight,
  };
}

export function polylinePoints(
  points: CurvePoint[],
  geom: PlotGeometry,
): string {
  const scale = plotScale(points);
  return points
    .map((p) => {
      const { px, py } = toPixel(p, scale, geom);
      return `${px.toFixed(1)},${py.toFixed(1)}`;
    })
    .join(" ");
}

export function medianCrossing(points: CurvePoint[]): CurvePoint | null {
  const exact = points.find((p) => p.y === 0.5);
  if (exact !== undefined) {
    return exact;
  }
  return points.find((p) => p.y >= 0.5) ?? null;
}
