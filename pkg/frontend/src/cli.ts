#!/usr/bin/env node
/**
 * figures - render sweep CSV outputs as standalone SVG files.
 *
 * Usage:
 *   figures tongue <tongue.csv> <fit-file> <out.svg>
 *   figures scaling <summary.csv> <fit.csv> <out.svg>
 *
 * Inputs are the simulator's published CSV formats; rendering never modifies
 * them and is deterministic (same inputs, byte-identical SVG).
 */

import { readFileSync, writeFileSync } from "node:fs";

import {
  parseFit,
  parseScalingFit,
  parseScalingSummary,
  parseTongue,
} from "./csv.js";
import { renderScaling } from "./scaling.js";
import { renderTongue } from "./tongue.js";

const USAGE =
  "usage: figures tongue <tongue.csv> <fit-file> <out.svg>\n" +
  "       figures scaling <summary.csv> <fit.csv> <out.svg>\n";

export function main(argv: string[]): number {
  if (argv.length !== 4) {
    process.stderr.write(USAGE);
    return 1;
  }
  const [kind, inPath, fitPath, outPath] = argv;
  try {
    let svg: string;
    if (kind === "tongue") {
      const grid = parseTongue(readFileSync(inPath, "utf8"), inPath);
      const fit = parseFit(readFileSync(fitPath, "utf8"), fitPath);
      svg = renderTongue(grid, fit);
    } else if (kind === "scaling") {
      const summary = parseScalingSummary(readFileSync(inPath, "utf8"), inPath);
      const fit = parseScalingFit(readFileSync(fitPath, "utf8"), fitPath);
      svg = renderScaling(summary, fit);
    } else {
      process.stderr.write(USAGE);
      return 1;
    }
    writeFileSync(outPath, svg);
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${err instanceof Error ? err.message : err}\n`);
    return 1;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
