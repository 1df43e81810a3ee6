import { describe, expect, it } from "vitest";

import { ecdfCurve, histogramCurve } from "../src/ecdf.js";

describe("ecdfCurve", () => {
  it("builds right-continuous steps from unsorted input", () => {
    const c = ecdfCurve([3, 1, 2]);
    expect(c.x).toEqual([1, 1, 2, 2, 3, 3]);
    expect(c.y).toEqual([0, 1 / 3, 1 / 3, 2 / 3, 2 / 3, 1]);
  });

  it("ends at 1 and starts at 0", () => {
    const c = ecdfCurve([5]);
    expect(c.y[0]).toBe(0);
    expect(c.y[c.y.length - 1]).toBe(1);
  });

  it("rejects empty samples", () => {
    expect(() => ecdfCurve([])).toThrow();
  });
});

describe("histogramCurve", () => {
  it("integrates to one over the range", () => {
    const values = Array.from({ length: 1000 }, (_, i) => i / 1000);
    const c = histogramCurve(values, 0, 1, 20);
    // step outline: every second x-pair spans one bin of width 1/20
    let integral = 0;
    for (let b = 0; b < 20; b++) {
      integral += c.y[2 * b] * (c.x[2 * b + 1] - c.x[2 * b]);
    }
    expect(integral).toBeCloseTo(1.0, 10);
  });

  it("rejects bad ranges", () => {
    expect(() => histogramCurve([1], 1, 1, 10)).toThrow();
  });
});
