import { execFileSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { describe, expect, it } from "vitest";

import { plotAll } from "../src/plots.js";
import { run } from "../src/cli.js";

// Smoke test against real verification outputs: drive the primary CLI for the
// r = 1 Gaussian relation at reduced scale, then render every figure.
describe("end-to-end against the verification CLI", () => {
  it("renders one ECDF overlay per relation/position from decimation outputs", () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), "betadec-e2e-"));
    try {
      execFileSync(
        "python3",
        ["-m", "betadec", "verify", "decimation", "--relation", "gaussian",
         "--r", "1", "--N", "2", "--M", "800", "--burn-in", "250",
         "--seed", "1301", "--out-dir", dir],
        { stdio: "pipe" },
      );
      const out = path.join(dir, "figs");
      const n = plotAll(dir, out);
      expect(n).toBe(2); // N = 2 surviving positions
      for (const pos of [1, 2]) {
        const svg = fs.readFileSync(
          path.join(out, `decimation_gaussian_r1_N2_pos${pos}.svg`), "utf8");
        expect(svg).toContain("<svg");
        expect(svg).toContain("KS D = ");
      }
    } finally {
      fs.rmSync(dir, { recursive: true, force: true });
    }
  }, 120_000);

  it("plot-all CLI command exits 0 and writes figures", () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), "betadec-e2e-cli-"));
    try {
      execFileSync(
        "python3",
        ["-m", "betadec", "verify", "decimation", "--relation", "jacobi",
         "--r", "1", "--N", "2", "--M", "600", "--burn-in", "200",
         "--seed", "1302", "--out-dir", dir],
        { stdio: "pipe" },
      );
      const code = run(["plot-all", "--report-dir", dir, "--out-dir", path.join(dir, "f")]);
      expect(code).toBe(0);
      expect(fs.readdirSync(path.join(dir, "f")).length).toBe(2);
    } finally {
      fs.rmSync(dir, { recursive: true, force: true });
    }
  }, 120_000);

  it("plot-all CLI reports empty input as a failure", () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), "betadec-e2e-empty-"));
    try {
      expect(run(["plot-all", "--report-dir", dir, "--out-dir", dir])).toBe(1);
    } finally {
      fs.rmSync(dir, { recursive: true, force: true });
    }
  });

  it("rejects bad usage", () => {
    expect(run(["unknown"])).toBe(2);
    expect(run(["plot-all"])).toBe(1); // missing flags -> error path
  });
});
