/** CLI: plot-ecdf renders one overlay, plot-all sweeps a report directory. */

import { plotAll, plotEcdfOverlay } from "./plots.js";

function parseFlags(argv: string[]): Map<string, string> {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    if (!argv[i].startsWith("--") || i + 1 >= argv.length) {
      throw new Error(`bad flag syntax near ${argv[i]}`);
    }
    flags.set(argv[i].slice(2), argv[i + 1]);
  }
  return flags;
}

function need(flags: Map<string, string>, name: string): string {
  const v = flags.get(name);
  if (v === undefined) throw new Error(`missing required flag --${name}`);
  return v;
}

export function run(argv: string[]): number {
  const [command, ...rest] = argv;
  try {
    if (command === "plot-ecdf") {
      const flags = parseFlags(rest);
      plotEcdfOverlay(
        need(flags, "lhs"),
        need(flags, "rhs"),
        Number(flags.get("position") ?? "1"),
        need(flags, "out"),
        flags.get("report"),
      );
      return 0;
    }
    if (command === "plot-all") {
      const flags = parseFlags(rest);
      const n = plotAll(need(flags, "report-dir"), need(flags, "out-dir"));
      console.log(`wrote ${n} figures`);
      return 0;
    }
    console.error("usage: plot-ecdf --lhs F --rhs F --out F [--position K --report F]");
    console.error("       plot-all --report-dir D --out-dir D");
    return 2;
  } catch (err) {
    console.error(String(err));
    return 1;
  }
}

const invokedDirectly = process.argv[1] && process.argv[1].endsWith("cli.js");
if (invokedDirectly) {
  process.exit(run(process.argv.slice(2)));
}
