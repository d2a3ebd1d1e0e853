import { MissingColumnError, Table } from "./csv.js";

export type FigureKind = "timeseries" | "staircase" | "boundary" | "heatmap";

export interface FigureSpec {
  kind: FigureKind;
  input: string;
  output: string;
  /** boundary-curve CSV drawn on top of the heatmap raster */
  overlay?: string;
  title?: string;
}

export const FIGURE_KINDS: FigureKind[] = ["timeseries", "staircase", "boundary", "heatmap"];

/** columns each kind reads; checked before any drawing happens */
export const REQUIRED_COLUMNS: Record<FigureKind, string[]> = {
  timeseries: ["t", "x1", "x2"],
  staircase: ["alpha", "freq1", "freq2", "locked"],
  boundary: ["delta_omega", "alpha_star"],
  heatmap: ["alpha", "delta_omega", "omega_prime_over_omega0"],
};

export const OVERLAY_COLUMNS = ["delta_omega", "alpha_c"];

export function checkColumns(table: Table, required: string[]): void {
  for (const name of required) {
    if (!table.columns.includes(name)) throw new MissingColumnError(name, table.columns);
  }
}
