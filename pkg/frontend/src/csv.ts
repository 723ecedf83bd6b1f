import { Matrix, fromRows } from "./matrix.js";

/**
 * Parse one numeric field of a matrix CSV.  The toolkit serializes the IEEE
 * specials as "inf"/"-inf"/"nan", which Number() does not accept.
 */
export function parseField(field: string): number {
  const s = field.trim();
  if (s === "inf") return Infinity;
  if (s === "-inf") return -Infinity;
  if (s === "nan") return NaN;
  if (s === "") return NaN;
  const v = Number(s);
  if (Number.isNaN(v) && s.toLowerCase() !== "nan") {
    throw new RangeError(`non-numeric CSV field ${JSON.stringify(field)}`);
  }
  return v;
}

/** Parse a comma-delimited matrix, skipping a single header row if present. */
export function parseMatrixCsv(text: string): Matrix {
  const lines = text.split("\n").filter((ln) => ln.trim().length > 0);
  if (lines.length === 0) {
    throw new RangeError("empty CSV matrix");
  }
  const rows: number[][] = [];
  for (let i = 0; i < lines.length; i++) {
    try {
      rows.push(lines[i].split(",").map(parseField));
    } catch (err) {
      if (i === 0) continue; // header row
      throw err;
    }
  }
  if (rows.length === 0) {
    throw new RangeError("CSV matrix has a header but no data rows");
  }
  return fromRows(rows);
}

/** Shortest round-trip decimal text, with inf/nan in the toolkit's spelling. */
export function formatField(value: number): string {
  if (Number.isNaN(value)) return "nan";
  if (value === Infinity) return "inf";
  if (value === -Infinity) return "-inf";
  return String(value);
}

export function formatMatrixCsv(m: Matrix): string {
  const lines: string[] = [];
  for (let i = 0; i < m.rows; i++) {
    const fields: string[] = [];
    for (let j = 0; j < m.cols; j++) fields.push(formatField(m.data[i * m.cols + j]));
    lines.push(fields.join(","));
  }
  return lines.join("\n") + "\n";
}
