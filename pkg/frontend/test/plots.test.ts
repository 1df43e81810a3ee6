import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { plotAll, plotEcdfOverlay, plotGapBars } from "../src/plots.js";

let dir: string;

beforeEach(() => {
  dir = fs.mkdtempSync(path.join(os.tmpdir(), "betadec-plots-"));
});

afterEach(() => {
  fs.rmSync(dir, { recursive: true, force: true });
});

function writeFixture(stem: string, positions = 2, rows = 40) {
  const header = Array.from({ length: positions }, (_, i) => `x${i + 1}`).join(",");
  const mk = (shift: number) =>
    [header]
      .concat(
        Array.from({ length: rows }, (_, i) =>
          Array.from({ length: positions }, (_, j) => (i / rows + shift + j).toFixed(6)).join(","),
        ),
      )
      .join("\n") + "\n";
  fs.writeFileSync(path.join(dir, `${stem}_lhs.csv`), mk(0));
  fs.writeFileSync(path.join(dir, `${stem}_rhs.csv`), mk(0.01));
  const report =
    "relation,r,N,position,ks_D,p_value,n1,n2,pass\n" +
    Array.from(
      { length: positions },
      (_, i) => `demo,1,${positions},${i + 1},0.05,0.5,${rows},${rows},true`,
    ).join("\n") +
    `\ndemo,1,${positions},all,0.05,0.5,${rows},${rows},true\n`;
  fs.writeFileSync(path.join(dir, `${stem}_report.csv`), report);
}

describe("plotEcdfOverlay", () => {
  it("writes an SVG with both curves and the KS annotation", () => {
    writeFixture("decimation_demo_r1_N2");
    const out = path.join(dir, "fig.svg");
    plotEcdfOverlay(
      path.join(dir, "decimation_demo_r1_N2_lhs.csv"),
      path.join(dir, "decimation_demo_r1_N2_rhs.csv"),
      1,
      out,
      path.join(dir, "decimation_demo_r1_N2_report.csv"),
    );
    const svg = fs.readFileSync(out, "utf8");
    expect(svg).toContain("<svg");
    expect((svg.match(/<polyline/g) ?? []).length).toBe(2);
    expect(svg).toContain("KS D = 0.0500");
    expect(svg).toContain("decimated LHS");
  });

  it("renders identical files as coincident curves", () => {
    writeFixture("decimation_same_r1_N2");
    const lhs = path.join(dir, "decimation_same_r1_N2_lhs.csv");
    const out = path.join(dir, "fig.svg");
    plotEcdfOverlay(lhs, lhs, 1, out);
    const svg = fs.readFileSync(out, "utf8");
    const points = [...svg.matchAll(/<polyline points="([^"]+)"/g)].map((m) => m[1]);
    expect(points).toHaveLength(2);
    expect(points[0]).toBe(points[1]);
  });

  it("fails on schema mismatch", () => {
    fs.writeFileSync(path.join(dir, "bad.csv"), "a,b\n1,2\n");
    expect(() =>
      plotEcdfOverlay(path.join(dir, "bad.csv"), path.join(dir, "bad.csv"), 1,
                      path.join(dir, "fig.svg")),
    ).toThrow();
  });
});

describe("plotGapBars", () => {
  it("renders one group per row with error bars", () => {
    const values = path.join(dir, "gap_values.csv");
    fs.writeFileSync(values, "label,mc,closed,se\ncase a,0.75,0.748,0.002\n");
    const out = path.join(dir, "gap.svg");
    plotGapBars(values, out);
    const svg = fs.readFileSync(out, "utf8");
    expect((svg.match(/<rect/g) ?? []).length).toBeGreaterThanOrEqual(3);
    expect(svg).toContain("MC");
  });
});

describe("plotAll", () => {
  it("writes one figure per relation/position", () => {
    writeFixture("decimation_gaussian_r1_N2", 2);
    writeFixture("decimation_jacobi_r2_N3", 3);
    const out = path.join(dir, "figs");
    const n = plotAll(dir, out);
    expect(n).toBe(5);
    const files = fs.readdirSync(out).sort();
    expect(files).toEqual([
      "decimation_gaussian_r1_N2_pos1.svg",
      "decimation_gaussian_r1_N2_pos2.svg",
      "decimation_jacobi_r2_N3_pos1.svg",
      "decimation_jacobi_r2_N3_pos2.svg",
      "decimation_jacobi_r2_N3_pos3.svg",
    ]);
  });

  it("treats spacing stems as histograms and gap stems as bars", () => {
    writeFixture("spacing_r1_N4_k0", 1);
    fs.writeFileSync(path.join(dir, "gap_a0_b0_report.csv"),
                     "relation,r,N,position,ks_D,p_value,n1,n2,pass\n" +
                     "gap,1,1,all,0.0,1.0,100,100,true\n");
    fs.writeFileSync(path.join(dir, "gap_a0_b0_values.csv"),
                     "label,mc,closed,se\ncase,0.75,0.751,0.002\n");
    const out = path.join(dir, "figs");
    const n = plotAll(dir, out);
    expect(n).toBe(2);
    expect(fs.readdirSync(out).sort()).toEqual(["gap_a0_b0.svg", "spacing_r1_N4_k0.svg"]);
  });

  it("errors on an empty directory", () => {
    expect(() => plotAll(dir, path.join(dir, "figs"))).toThrow(/no \*_report\.csv/);
  });

  it("is idempotent on rerun", () => {
    writeFixture("decimation_gaussian_r1_N2", 2);
    const out = path.join(dir, "figs");
    plotAll(dir, out);
    const first = fs.readFileSync(path.join(out, "decimation_gaussian_r1_N2_pos1.svg"), "utf8");
    plotAll(dir, out);
    const second = fs.readFileSync(path.join(out, "decimation_gaussian_r1_N2_pos1.svg"), "utf8");
    expect(second).toBe(first);
  });
});
