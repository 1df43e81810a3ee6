/** Figure builders: strictly renderers of the verification CLI's CSVs.
 * No statistic is recomputed here; KS values come from the report files. */

import * as fs from "node:fs";
import * as path from "node:path";

import { column, parseGapValuesCsv, parseReportCsv, parseSamplesCsv, ReportRow } from "./csv.js";
import { ecdfCurve, histogramCurve } from "./ecdf.js";
import { renderBarChart, renderLineChart } from "./svg.js";

const LHS_COLOR = "#1f77b4";
const RHS_COLOR = "#d62728";

function annotationFor(rows: ReportRow[] | undefined, position: number): string | undefined {
  if (!rows) return undefined;
  const row = rows.find((r) => r.position === String(position));
  if (!row) return undefined;
  return `KS D = ${row.ksD.toPrecision(3)}, p = ${row.pValue.toPrecision(3)}`;
}

export function plotEcdfOverlay(lhsCsv: string, rhsCsv: string, position: number,
                                outPath: string, reportCsv?: string, label = ""): void {
  const lhs = parseSamplesCsv(fs.readFileSync(lhsCsv, "utf8"));
  const rhs = parseSamplesCsv(fs.readFileSync(rhsCsv, "utf8"));
  const rows = reportCsv ? parseReportCsv(fs.readFileSync(reportCsv, "utf8")) : undefined;
  const a = ecdfCurve(column(lhs, position - 1));
  const b = ecdfCurve(column(rhs, position - 1));
  const svg = renderLineChart({
    title: label || `ECDF overlay, position ${position}`,
    xLabel: `order statistic ${position}`,
    yLabel: "empirical CDF",
    series: [
      { label: "decimated LHS", x: a.x, y: a.y, color: LHS_COLOR },
      { label: "direct RHS", x: b.x, y: b.y, color: RHS_COLOR },
    ],
    annotation: annotationFor(rows, position),
  });
  fs.writeFileSync(outPath, svg);
}

export function plotSpacingHistogram(lhsCsv: string, rhsCsv: string, outPath: string,
                                     reportCsv?: string, label = ""): void {
  const lhs = column(parseSamplesCsv(fs.readFileSync(lhsCsv, "utf8")), 0);
  const rhs = column(parseSamplesCsv(fs.readFileSync(rhsCsv, "utf8")), 0);
  const rows = reportCsv ? parseReportCsv(fs.readFileSync(reportCsv, "utf8")) : undefined;
  const lo = Math.min(...lhs, ...rhs);
  const hi = Math.max(...lhs, ...rhs);
  const a = histogramCurve(lhs, lo, hi, 40);
  const b = histogramCurve(rhs, lo, hi, 40);
  const svg = renderLineChart({
    title: label || "spacing distributions",
    xLabel: "scaled spacing",
    yLabel: "density",
    series: [
      { label: "rescaled LHS", x: a.x, y: a.y, color: LHS_COLOR },
      { label: "direct RHS", x: b.x, y: b.y, color: RHS_COLOR },
    ],
    annotation: annotationFor(rows, 1),
  });
  fs.writeFileSync(outPath, svg);
}

export function plotGapBars(valuesCsv: string, outPath: string, label = ""): void {
  const rows = parseGapValuesCsv(fs.readFileSync(valuesCsv, "utf8"));
  const groups = rows.map((r) => ({
    label: r.label.replace(/\|/g, " "),
    values: [
      { name: "MC", value: r.mc, color: LHS_COLOR, error: 3 * r.se },
      { name: "closed", value: r.closed, color: RHS_COLOR },
    ],
  }));
  fs.writeFileSync(outPath, renderBarChart(label || "gap probability: MC vs closed form",
                                           "probability", groups));
}

/** Render every figure derivable from a directory of verification outputs:
 * one ECDF overlay per relation/position (spacing gets histogram form, gap
 * gets MC-vs-closed bars).  Returns the number of figures written; an input
 * directory with no report CSVs is an error. */
export function plotAll(reportDir: string, outDir: string): number {
  const entries = fs.readdirSync(reportDir).filter((f) => f.endsWith("_report.csv"));
  if (entries.length === 0) {
    throw new Error(`no *_report.csv files in ${reportDir}`);
  }
  fs.mkdirSync(outDir, { recursive: true });
  let figures = 0;
  for (const entry of entries) {
    const stem = entry.slice(0, -"_report.csv".length);
    const reportPath = path.join(reportDir, entry);
    const lhsPath = path.join(reportDir, `${stem}_lhs.csv`);
    const rhsPath = path.join(reportDir, `${stem}_rhs.csv`);
    const valuesPath = path.join(reportDir, `${stem}_values.csv`);
    if (fs.existsSync(valuesPath)) {
      plotGapBars(valuesPath, path.join(outDir, `${stem}.svg`), stem);
      figures += 1;
      continue;
    }
    if (!fs.existsSync(lhsPath) || !fs.existsSync(rhsPath)) continue;
    if (stem.startsWith("spacing")) {
      plotSpacingHistogram(lhsPath, rhsPath, path.join(outDir, `${stem}.svg`),
                           reportPath, stem);
      figures += 1;
      continue;
    }
    const rows = parseReportCsv(fs.readFileSync(reportPath, "utf8"));
    const positions = rows.filter((r) => r.position !== "all").length;
    for (let pos = 1; pos <= positions; pos++) {
      plotEcdfOverlay(lhsPath, rhsPath, pos,
                      path.join(outDir, `${stem}_pos${pos}.svg`), reportPath,
                      `${stem}, position ${pos}`);
      figures += 1;
    }
  }
  if (figures === 0) {
    throw new Error(`report CSVs found but no renderable sample files in ${reportDir}`);
  }
  return figures;
}
