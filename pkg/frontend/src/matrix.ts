/** Dense row-major float64 matrix. */
export type Matrix = {
  rows: number;
  cols: number;
  /** Row-major payload, length rows * cols. */
  data: Float64Array;
};

export function matrix(rows: number, cols: number, data?: Float64Array): Matrix {
  if (!Number.isInteger(rows) || !Number.isInteger(cols) || rows < 1 || cols < 1) {
    throw new RangeError(`invalid matrix shape ${rows}x${cols}`);
  }
  const payload = data ?? new Float64Array(rows * cols);
  if (payload.length !== rows * cols) {
    throw new RangeError(
      `payload length ${payload.length} does not match ${rows}x${cols}`
    );
  }
  return { rows, cols, data: payload };
}

export function fromRows(values: number[][]): Matrix {
  if (!Array.isArray(values) || values.length === 0 || !Array.isArray(values[0])) {
    throw new TypeError("expected a non-empty array of rows");
  }
  const rows = values.length;
  const cols = values[0].length;
  const out = new Float64Array(rows * cols);
  for (let i = 0; i < rows; i++) {
    if (values[i].length !== cols) {
      throw new RangeError(`row ${i} has ${values[i].length} fields, expected ${cols}`);
    }
    for (let j = 0; j < cols; j++) out[i * cols + j] = values[i][j];
  }
  return matrix(rows, cols, out);
}

export function at(m: Matrix, i: number, j: number): number {
  return m.data[i * m.cols + j];
}

export function column(m: Matrix, j: number): Float64Array {
  const out = new Float64Array(m.rows);
  for (let i = 0; i < m.rows; i++) out[i] = m.data[i * m.cols + j];
  return out;
}

/** Pairwise (cascade) summation; error grows O(log n) like NumPy's reducer. */
export function pairwiseSum(values: Float64Array, lo = 0, hi = values.length): number {
  const n = hi - lo;
  if (n <= 8) {
    let acc = 0;
    for (let i = lo; i < hi; i++) acc += values[i];
    return acc;
  }
  const mid = lo + (n >> 1);
  return pairwiseSum(values, lo, mid) + pairwiseSum(values, mid, hi);
}
