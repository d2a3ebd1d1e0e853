#!/usr/bin/env node
/**
 * oscsync-render --kind <timeseries|staircase|boundary|heatmap>
 *                --in <csv> --out <svg> [--overlay <csv>] [--title <text>]
 *
 * Exit codes: 0 written (or --help), 1 data error (bad/missing columns,
 * empty CSV), 2 usage error.  On any error no output file is written.
 */

import { readFileSync, writeFileSync, mkdirSync } from "node:fs";
import { dirname } from "node:path";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { EmptyDataError, MissingColumnError } from "./csv.js";
import { FIGURE_KINDS, FigureKind, FigureSpec } from "./figspec.js";
import { renderFigure } from "./render.js";

const USAGE = `usage: oscsync-render --kind <${FIGURE_KINDS.join("|")}> --in <csv> --out <svg>
                      [--overlay <csv>] [--title <text>]`;

export function runCli(argv: string[]): number {
  let values: {
    kind?: string;
    in?: string;
    out?: string;
    overlay?: string;
    title?: string;
    help?: boolean;
  };
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        kind: { type: "string" },
        in: { type: "string" },
        out: { type: "string" },
        overlay: { type: "string" },
        title: { type: "string" },
        help: { type: "boolean" },
      },
    }));
  } catch (err) {
    console.error(`usage error: ${(err as Error).message}`);
    return 2;
  }

  if (values.help) {
    console.log(USAGE);
    return 0;
  }

  const { kind, in: input, out, overlay, title } = values;
  if (!kind || !input || !out) {
    console.error("usage error: --kind, --in and --out are required");
    return 2;
  }
  if (!FIGURE_KINDS.includes(kind as FigureKind)) {
    console.error(`usage error: unknown kind '${kind}' (choose from ${FIGURE_KINDS.join(", ")})`);
    return 2;
  }
  if (overlay && kind !== "heatmap") {
    console.error("usage error: --overlay applies to the heatmap kind only");
    return 2;
  }

  const spec: FigureSpec = { kind: kind as FigureKind, input, output: out, overlay, title };
  let rendered: string;
  try {
    const inputText = readFileSync(input, "utf-8");
    const overlayText = overlay === undefined ? undefined : readFileSync(overlay, "utf-8");
    rendered = renderFigure(spec, inputText, overlayText);
  } catch (err) {
    if (
      err instanceof MissingColumnError ||
      err instanceof EmptyDataError ||
      (err as NodeJS.ErrnoException).code === "ENOENT"
    ) {
      console.error(`oscsync-render: ${(err as Error).message}`);
      return 1;
    }
    throw err;
  }

  mkdirSync(dirname(out), { recursive: true });
  writeFileSync(out, rendered);
  console.log(`wrote ${out}`);
  return 0;
}

const isMain =
  process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href;
if (isMain) {
  process.exit(runCli(process.argv.slice(2)));
}
