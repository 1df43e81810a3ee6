/** Empirical distribution and histogram coordinates for plotting. */

export interface Curve {
  x: number[];
  y: number[];
}

/** Step-function ECDF coordinates: two points per sample so the rendered
 * polyline shows proper right-continuous steps. */
export function ecdfCurve(values: number[]): Curve {
  if (values.length === 0) throw new Error("ecdf of empty sample");
  const sorted = [...values].sort((a, b) => a - b);
  const n = sorted.length;
  const x: number[] = [];
  const y: number[] = [];
  for (let i = 0; i < n; i++) {
    x.push(sorted[i], sorted[i]);
    y.push(i / n, (i + 1) / n);
  }
  return { x, y };
}

/** Density-normalized histogram rendered as a step outline. */
export function histogramCurve(values: number[], lo: number, hi: number, bins: number): Curve {
  if (values.length === 0) throw new Error("histogram of empty sample");
  if (!(hi > lo) || bins < 1) throw new Error("bad histogram range");
  const counts = new Array<number>(bins).fill(0);
  const width = (hi - lo) / bins;
  for (const v of values) {
    if (v < lo || v > hi) continue;
    const idx = Math.min(bins - 1, Math.floor((v - lo) / width));
    counts[idx] += 1;
  }
  const norm = values.length * width;
  const x: number[] = [];
  const y: number[] = [];
  for (let b = 0; b < bins; b++) {
    const density = counts[b] / norm;
    x.push(lo + b * width, lo + (b + 1) * width);
    y.push(density, density);
  }
  return { x, y };
}
