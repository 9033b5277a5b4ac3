/**
 * Parsers for the simulator's CSV and key=value outputs.
 *
 * Formats (LF line endings, '.' decimal, header row):
 *   tongue:  "alpha,delta,Ea,blowups", one row per sweep cell
 *   scaling: "n,delta_max_median" (summary) and "beta,stderr" (fit)
 *   fit:     plain "key = value" lines with c1, c2, alpha_star, ...
 */

export interface TongueGrid {
  alphas: number[];
  deltas: number[];
  /** Ea[i][j] for alphas[i], deltas[j]. */
  Ea: number[][];
}

export interface BoundaryFit {
  c1: number;
  c2: number;
  alphaStar: number;
}

export interface ScalingSummary {
  ns: number[];
  medians: number[];
}

export interface ScalingFit {
  beta: number;
  stderr: number;
}

function splitRows(text: string, expectedHeader: string, path: string): string[][] {
  const lines = text.split("\n").filter((l) => l.trim().length > 0);
  if (lines.length === 0 || lines[0].trim() !== expectedHeader) {
    throw new Error(
      `${path}: expected header "${expectedHeader}", got "${lines[0] ?? ""}"`,
    );
  }
  return lines.slice(1).map((l) => l.split(","));
}

function num(s: string, path: string): number {
  const v = Number(s);
  if (!Number.isFinite(v)) {
    throw new Error(`${path}: bad numeric field "${s}"`);
  }
  return v;
}

/**
 * Parse a tongue CSV into a full rectangular grid. A ragged grid (any
 * missing alpha/delta combination) is an error that lists the missing cells.
 */
export function parseTongue(text: string, path = "tongue.csv"): TongueGrid {
  const rows = splitRows(text, "alpha,delta,Ea,blowups", path);
  const cells = new Map<string, number>();
  const alphaSet = new Set<number>();
  const deltaSet = new Set<number>();
  for (const r of rows) {
    if (r.length !== 4) {
      throw new Error(`${path}: expected 4 fields, got ${r.length}`);
    }
    const a = num(r[0], path);
    const d = num(r[1], path);
    alphaSet.add(a);
    deltaSet.add(d);
    cells.set(`${a},${d}`, num(r[2], path));
  }
  const alphas = [...alphaSet].sort((x, y) => x - y);
  const deltas = [...deltaSet].sort((x, y) => x - y);
  const missing: string[] = [];
  const Ea: number[][] = [];
  for (const a of alphas) {
    const row: number[] = [];
    for (const d of deltas) {
      const v = cells.get(`${a},${d}`);
      if (v === undefined) {
        missing.push(`(alpha=${a}, delta=${d})`);
      } else {
        row.push(v);
      }
    }
    Ea.push(row);
  }
  if (missing.length > 0) {
    throw new Error(`${path}: ragged grid, missing cells: ${missing.join(", ")}`);
  }
  if (alphas.length === 0) {
    throw new Error(`${path}: no data rows`);
  }
  return { alphas, deltas, Ea };
}

/** Parse the fit-boundary output ("key = value" lines). */
export function parseFit(text: string, path = "fit"): BoundaryFit {
  const values = new Map<string, string>();
  for (const raw of text.split("\n")) {
    const line = raw.split("#")[0].trim();
    if (line.length === 0) continue;
    const eq = line.indexOf("=");
    if (eq < 0) {
      throw new Error(`${path}: bad line "${line}"`);
    }
    values.set(line.slice(0, eq).trim(), line.slice(eq + 1).trim());
  }
  for (const key of ["c1", "c2"]) {
    if (!values.has(key)) {
      throw new Error(`${path}: missing required key "${key}"`);
    }
  }
  const c1 = num(values.get("c1")!, path);
  const c2 = num(values.get("c2")!, path);
  const alphaStar = values.has("alpha_star")
    ? num(values.get("alpha_star")!, path)
    : c2 / c1;
  return { c1, c2, alphaStar };
}

export function parseScalingSummary(text: string, path = "summary.csv"): ScalingSummary {
  const rows = splitRows(text, "n,delta_max_median", path);
  const ns: number[] = [];
  const medians: number[] = [];
  for (const r of rows) {
    ns.push(num(r[0], path));
    medians.push(num(r[1], path));
  }
  if (ns.length < 3) {
    throw new Error(`${path}: need at least 3 network sizes, got ${ns.length}`);
  }
  return { ns, medians };
}

export function parseScalingFit(text: string, path = "fit.csv"): ScalingFit {
  const rows = splitRows(text, "beta,stderr", path);
  if (rows.length !== 1) {
    throw new Error(`${path}: expected exactly one data row`);
  }
  return { beta: num(rows[0][0], path), stderr: num(rows[0][1], path) };
}
