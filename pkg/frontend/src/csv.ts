/**
 * Minimal reader for the simulator's CSV contract: one header row,
 * comma-separated numeric cells, "nan" for missing raster values.
 */

export class MissingColumnError extends Error {
  readonly column: string;

  constructor(column: string, available: string[]) {
    super(`missing column '${column}' (file has: ${available.join(", ")})`);
    this.name = "MissingColumnError";
    this.column = column;
  }
}

export class EmptyDataError extends Error {
  constructor(detail: string) {
    super(`no data rows: ${detail}`);
    this.name = "EmptyDataError";
  }
}

export interface Table {
  columns: string[];
  rows: number[][];
}

export function parseCsv(text: string): Table {
  const lines = text.split("\n").filter((line) => line.trim().length > 0);
  if (lines.length === 0) throw new EmptyDataError("file is empty");
  const header = lines[0]!;
  const columns = header.split(",").map((c) => c.trim());
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new Error(`row ${i + 1} has ${cells.length} cells, header has ${columns.length}`);
    }
    return cells.map((c) => Number(c));
  });
  if (rows.length === 0) throw new EmptyDataError("header only");
  return { columns, rows };
}

export function column(table: Table, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) throw new MissingColumnError(name, table.columns);
  return table.rows.map((r) => r[idx]!);
}
