/** specedge-figures render --kind <kind> --in <csv> --out <svg|png>
 *
 * Rendering is read-only on the inputs; output format follows the
 * extension of --out.  Schema mismatches exit nonzero and name the
 * offending column.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { SchemaError } from "./csv.js";
import { FIGURE_KINDS, FigureKind, renderFigure } from "./figures.js";
import { sceneToPng } from "./png.js";
import { sceneToSvg } from "./svg.js";

interface Args {
  kind: FigureKind;
  input: string;
  output: string;
  xLog: boolean;
}

function parseArgs(argv: string[]): Args {
  if (argv[0] !== "render") {
    throw new UsageError(`unknown command ${argv[0] ?? "(none)"}; expected "render"`);
  }
  let kind: string | undefined;
  let input: string | undefined;
  let output: string | undefined;
  let xLog = false;
  for (let i = 1; i < argv.length; i++) {
    switch (argv[i]) {
      case "--kind":
        kind = argv[++i];
        break;
      case "--in":
        input = argv[++i];
        break;
      case "--out":
        output = argv[++i];
        break;
      case "--x-log":
        xLog = true;
        break;
      default:
        throw new UsageError(`unknown flag ${argv[i]}`);
    }
  }
  if (!kind || !input || !output) {
    throw new UsageError("render needs --kind, --in and --out");
  }
  if (!(FIGURE_KINDS as readonly string[]).includes(kind)) {
    throw new UsageError(`unknown kind ${kind}; expected one of ${FIGURE_KINDS.join(", ")}`);
  }
  return { kind: kind as FigureKind, input, output, xLog };
}

class UsageError extends Error {}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    process.stderr.write(`usage error: ${(err as Error).message}\n`);
    return 2;
  }
  try {
    const text = readFileSync(args.input, "utf8");
    const scene = renderFigure({ kind: args.kind, csvText: text, xLog: args.xLog });
    if (args.output.endsWith(".png")) {
      writeFileSync(args.output, sceneToPng(scene));
    } else if (args.output.endsWith(".svg")) {
      writeFileSync(args.output, sceneToSvg(scene));
    } else {
      process.stderr.write("output extension must be .svg or .png\n");
      return 2;
    }
  } catch (err) {
    if (err instanceof SchemaError) {
      const hint = err.column ? ` (column: ${err.column})` : "";
      process.stderr.write(`schema error: ${err.message}${hint}\n`);
      return 1;
    }
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
