import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import {
  medianCrossing,
  plotScale,
  polylinePoints,
  toPixel,
} from "../src/curvePlot.js";
import type { CurvePoint } from "../src/types.js";

const geom = { width: 100, height: 50, padding: 10 };

describe("polylinePoints", () => {
  it("maps points into the padded viewport with inverted y", () => {
    const points: CurvePoint[] = [
      { x: 0, y: 0 },
      { x: 2, y: 1 },
    ];
    expect(polylinePoints(points, geom)).toBe("10.0,40.0 90.0,10.0");
  });

  it("keeps x order for a monotone curve", () => {
    const points: CurvePoint[] = [
      { x: 0, y: 0 },
      { x: 1, y: 0.2 },
      { x: 2, y: 0.9 },
    ];
    const xs = polylinePoints(points, geom)
      .split(" ")
      .map((pair) => Number(pair.split(",")[0]));
    expect(xs).toEqual([...xs].sort((a, b) => a - b));
  });
});

describe("medianCrossing", () => {
  it("prefers the exact service-sampled median point", () => {
    const points: CurvePoint[] = [
      { x: 0.1, y: 0.2 },
      { x: 0.35, y: 0.5 },
      { x: 0.4, y: 0.55 },
    ];
    expect(medianCrossing(points)).toEqual({ x: 0.35, y: 0.5 });
  });

  it("falls back to the first point at or above 0.5", () => {
    const points: CurvePoint[] = [
      { x: 0.1, y: 0.2 },
      { x: 0.4, y: 0.62 },
    ];
    expect(medianCrossing(points)).toEqual({ x: 0.4, y: 0.62 });
  });

  it("is null when the curve never reaches 0.5", () => {
    expect(medianCrossing([{ x: 1, y: 0.3 }])).toBeNull();
  });
});

describe("toPixel", () => {
  it("places the maximum at the top-right inner corner", () => {
    const points: CurvePoint[] = [
      { x: 0, y: 0 },
      { x: 4, y: 2 },
    ];
    const scale = plotScale(points);
    expect(toPixel(points[1]!, scale, geom)).toEqual({ px: 90, py: 10 });
  });
});

describe("ApiClient.getCurve", () => {
  it("returns a not-found result for 404 responses", async () => {
    const client = new ApiClient("", async () => ({
      status: 404,
      json: async () => ({
        diagnostics: [
          {
            severity: "error",
            code: "unknown_curve_target",
            path: "$",
            message: "no fragility for component 'ghost'",
          },
        ],
      }),
    }));
    const result = await client.getCurve("m1", "fragility", "ghost/seism");
    expect(result.ok).toBe(false);
    if (!result.ok) {
      expect(result.status).toBe(404);
      expect(result.diagnostics[0]!.code).toBe("unknown_curve_target");
    }
  });

  it("passes kind and target as query parameters", async () => {
    const urls: string[] = [];
    const client = new ApiClient("", async (url) => {
      urls.push(url);
      return {
        status: 200,
        json: async () => ({
          kind: "hazard",
          target: "seism/upper_valley",
          unit: "pga_g",
          points: [],
        }),
      };
    });
    const result = await client.getCurve("m1", "hazard", "seism/upper_valley");
    expect(result.ok).toBe(true);
    expect(urls[0]).toBe(
      "/models/m1/curves?kind=hazard&target=seism%2Fupper_valley",
    );
  });
});
