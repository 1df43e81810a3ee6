/** Minimal standalone SVG chart assembly: no DOM, no dependencies. */

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color: string;
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  annotation?: string;
  width?: number;
  height?: number;
}

const MARGIN = { top: 42, right: 20, bottom: 46, left: 58 };

function niceTicks(lo: number, hi: number, count = 5): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = span / count / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = mult * step;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12 * span; v += s) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1000 || a < 0.001) return v.toExponential(1);
  return String(Number(v.toPrecision(4)));
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderLineChart(opts: ChartOptions): string {
  const width = opts.width ?? 640;
  const height = opts.height ?? 420;
  const iw = width - MARGIN.left - MARGIN.right;
  const ih = height - MARGIN.top - MARGIN.bottom;
  const xs = opts.series.flatMap((s) => s.x);
  const ys = opts.series.flatMap((s) => s.y);
  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  let yLo = Math.min(...ys, 0);
  let yHi = Math.max(...ys);
  if (!(xHi > xLo)) {
    xLo -= 0.5;
    xHi += 0.5;
  }
  if (!(yHi > yLo)) yHi = yLo + 1;
  yHi *= 1.02;
  const px = (v: number) => MARGIN.left + ((v - xLo) / (xHi - xLo)) * iw;
  const py = (v: number) => MARGIN.top + ih - ((v - yLo) / (yHi - yLo)) * ih;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    `<text x="${width / 2}" y="22" text-anchor="middle" font-size="15">${esc(opts.title)}</text>`,
  );
  for (const t of niceTicks(xLo, xHi)) {
    const x = px(t);
    parts.push(
      `<line x1="${x}" y1="${MARGIN.top}" x2="${x}" y2="${MARGIN.top + ih}" stroke="#ddd"/>`,
      `<text x="${x}" y="${MARGIN.top + ih + 16}" text-anchor="middle" font-size="11">${fmt(t)}</text>`,
    );
  }
  for (const t of niceTicks(yLo, yHi)) {
    const y = py(t);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + iw}" y2="${y}" stroke="#ddd"/>`,
      `<text x="${MARGIN.left - 6}" y="${y + 4}" text-anchor="end" font-size="11">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${iw}" height="${ih}" fill="none" stroke="#333"/>`,
    `<text x="${MARGIN.left + iw / 2}" y="${height - 10}" text-anchor="middle" font-size="12">${esc(opts.xLabel)}</text>`,
    `<text x="16" y="${MARGIN.top + ih / 2}" text-anchor="middle" font-size="12" ` +
      `transform="rotate(-90 16 ${MARGIN.top + ih / 2})">${esc(opts.yLabel)}</text>`,
  );
  opts.series.forEach((s, i) => {
    const pts = s.x.map((v, k) => `${px(v).toFixed(2)},${py(s.y[k]).toFixed(2)}`).join(" ");
    parts.push(`<polyline points="${pts}" fill="none" stroke="${s.color}" stroke-width="1.6"/>`);
    const ly = MARGIN.top + 14 + 16 * i;
    parts.push(
      `<line x1="${MARGIN.left + iw - 130}" y1="${ly - 4}" x2="${MARGIN.left + iw - 106}" y2="${ly - 4}" ` +
        `stroke="${s.color}" stroke-width="2"/>`,
      `<text x="${MARGIN.left + iw - 100}" y="${ly}" font-size="11">${esc(s.label)}</text>`,
    );
  });
  if (opts.annotation) {
    parts.push(
      `<text x="${MARGIN.left + 8}" y="${MARGIN.top + 14}" font-size="11" fill="#444">` +
        `${esc(opts.annotation)}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}

export interface BarGroup {
  label: string;
  values: { name: string; value: number; color: string; error?: number }[];
}

export function renderBarChart(title: string, yLabel: string, groups: BarGroup[],
                               width = 640, height = 420): string {
  const iw = width - MARGIN.left - MARGIN.right;
  const ih = height - MARGIN.top - MARGIN.bottom;
  const all = groups.flatMap((g) => g.values.map((v) => v.value));
  const yHi = Math.max(...all, 0) * 1.15 || 1;
  const py = (v: number) => MARGIN.top + ih - (v / yHi) * ih;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    `<text x="${width / 2}" y="22" text-anchor="middle" font-size="15">${esc(title)}</text>`,
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${iw}" height="${ih}" fill="none" stroke="#333"/>`,
    `<text x="16" y="${MARGIN.top + ih / 2}" text-anchor="middle" font-size="12" ` +
      `transform="rotate(-90 16 ${MARGIN.top + ih / 2})">${esc(yLabel)}</text>`,
  ];
  for (const t of niceTicks(0, yHi)) {
    const y = py(t);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + iw}" y2="${y}" stroke="#ddd"/>`,
      `<text x="${MARGIN.left - 6}" y="${y + 4}" text-anchor="end" font-size="11">${fmt(t)}</text>`,
    );
  }
  const groupWidth = iw / Math.max(1, groups.length);
  groups.forEach((g, gi) => {
    const x0 = MARGIN.left + gi * groupWidth;
    const barWidth = (groupWidth * 0.7) / g.values.length;
    g.values.forEach((v, vi) => {
      const x = x0 + groupWidth * 0.15 + vi * barWidth;
      parts.push(
        `<rect x="${x.toFixed(2)}" y="${py(v.value).toFixed(2)}" width="${(barWidth * 0.9).toFixed(2)}" ` +
          `height="${(MARGIN.top + ih - py(v.value)).toFixed(2)}" fill="${v.color}"/>`,
      );
      if (v.error) {
        const cx = x + barWidth * 0.45;
        parts.push(
          `<line x1="${cx.toFixed(2)}" y1="${py(v.value - v.error).toFixed(2)}" ` +
            `x2="${cx.toFixed(2)}" y2="${py(v.value + v.error).toFixed(2)}" stroke="#000"/>`,
        );
      }
      parts.push(
        `<text x="${(x + barWidth * 0.45).toFixed(2)}" y="${MARGIN.top + ih + 16}" ` +
          `text-anchor="middle" font-size="10">${esc(v.name)}</text>`,
      );
    });
    parts.push(
      `<text x="${x0 + groupWidth / 2}" y="${height - 10}" text-anchor="middle" font-size="11">` +
        `${esc(g.label)}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("\n");
}
