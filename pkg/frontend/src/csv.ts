/** Minimal CSV handling for the specedge output schemas. */

export class SchemaError extends Error {
  constructor(message: string, readonly column?: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export interface Table {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((ln) => ln.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV: no header row");
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((ln) => ln.split(","));
  if (rows.length === 0) {
    throw new SchemaError("empty CSV: header but no data rows");
  }
  for (const row of rows) {
    if (row.length !== header.length) {
      throw new SchemaError(
        `ragged CSV row: expected ${header.length} fields, got ${row.length}`,
      );
    }
  }
  return { header, rows };
}

/** Map required column names to indices; name the first missing column. */
export function requireColumns(
  table: Table,
  columns: string[],
): Record<string, number> {
  const index: Record<string, number> = {};
  for (const col of columns) {
    const i = table.header.indexOf(col);
    if (i < 0) {
      throw new SchemaError(`missing column "${col}"`, col);
    }
    index[col] = i;
  }
  return index;
}

/** Numeric cell; empty fields become NaN (optional columns). */
export function num(row: string[], idx: number): number {
  const cell = row[idx];
  return cell === "" ? NaN : Number(cell);
}

export function column(table: Table, idx: number): number[] {
  return table.rows.map((r) => num(r, idx));
}
