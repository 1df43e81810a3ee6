/** Parsers for the verification CLI's CSV schemas (strict: bad headers or
 * non-numeric cells are schema errors, not warnings). */

export interface SampleTable {
  header: string[];
  rows: number[][];
}

export class SchemaError extends Error {}

function splitLines(text: string): string[] {
  return text.split("\n").filter((line) => line.length > 0);
}

/** Sample batches: header x1..xd, one configuration per row. */
export function parseSamplesCsv(text: string): SampleTable {
  const lines = splitLines(text);
  if (lines.length === 0) throw new SchemaError("empty samples CSV");
  const header = lines[0].split(",");
  header.forEach((name, i) => {
    if (name !== `x${i + 1}`) {
      throw new SchemaError(`bad samples header: expected x${i + 1}, got ${name}`);
    }
  });
  const rows = lines.slice(1).map((line, r) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new SchemaError(`row ${r + 1}: expected ${header.length} columns`);
    }
    return cells.map((cell) => {
      const v = Number(cell);
      if (!Number.isFinite(v)) throw new SchemaError(`row ${r + 1}: bad number ${cell}`);
      return v;
    });
  });
  if (rows.length === 0) throw new SchemaError("samples CSV has no data rows");
  return { header, rows };
}

export function column(table: SampleTable, index: number): number[] {
  if (index < 0 || index >= table.header.length) {
    throw new SchemaError(`column ${index + 1} out of range (d = ${table.header.length})`);
  }
  return table.rows.map((row) => row[index]);
}

export interface ReportRow {
  relation: string;
  r: number;
  N: number;
  position: string; // "1", "2", ... or "all"
  ksD: number;
  pValue: number;
  n1: number;
  n2: number;
  pass: boolean;
}

const REPORT_HEADER = "relation,r,N,position,ks_D,p_value,n1,n2,pass";

/** Verification reports: one row per compared position plus a summary row. */
export function parseReportCsv(text: string): ReportRow[] {
  const lines = splitLines(text);
  if (lines.length === 0 || lines[0] !== REPORT_HEADER) {
    throw new SchemaError(`bad report header: ${lines[0] ?? "(empty)"}`);
  }
  return lines.slice(1).map((line) => {
    const c = line.split(",");
    if (c.length !== 9) throw new SchemaError(`bad report row: ${line}`);
    return {
      relation: c[0],
      r: Number(c[1]),
      N: Number(c[2]),
      position: c[3],
      ksD: Number(c[4]),
      pValue: Number(c[5]),
      n1: Number(c[6]),
      n2: Number(c[7]),
      pass: c[8] === "true",
    };
  });
}

export interface GapValuesRow {
  label: string;
  mc: number;
  closed: number;
  se: number;
}

export function parseGapValuesCsv(text: string): GapValuesRow[] {
  const lines = splitLines(text);
  if (lines.length === 0 || lines[0] !== "label,mc,closed,se") {
    throw new SchemaError(`bad gap values header: ${lines[0] ?? "(empty)"}`);
  }
  return lines.slice(1).map((line) => {
    const c = line.split(",");
    if (c.length !== 4) throw new SchemaError(`bad gap values row: ${line}`);
    return { label: c[0], mc: Number(c[1]), closed: Number(c[2]), se: Number(c[3]) };
  });
}
