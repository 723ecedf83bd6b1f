import { mkdtempSync, readFileSync, rmSync, writeFileSync, existsSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { parseMatrixCsv } from "./csv.js";
import { NotFittedError } from "./errors.js";
import { decodeFrmx, encodeFrmx } from "./frmx.js";
import { Matrix, at, fromRows, matrix, pairwiseSum } from "./matrix.js";
import { resolveCommand, runCli } from "./runner.js";

/** Dense 3-D array in C order. */
export type Cube = {
  dims: [number, number, number];
  data: Float64Array;
};

export function cubeAt(c: Cube, i: number, j: number, k: number): number {
  const [, d1, d2] = c.dims;
  return c.data[(i * d1 + j) * d2 + k];
}

export type FracRidgeOptions = {
  /** Requested norm fractions; default 0.05 .. 1.0 in steps of 0.05. */
  fracs?: number[];
  /** Relative singular-value truncation tolerance. */
  tol?: number;
  /** Predictor standardization mode passed through to the solver. */
  standardize?: "none" | "center" | "zscore";
  /** Override for the CLI command line (otherwise FRACSOLVE_BIN or "fracsolve"). */
  command?: string[];
};

const DEFAULT_FRACS = Array.from({ length: 20 }, (_, i) => (i + 1) * 0.05);

function toMatrix(values: number[][] | Matrix, what: string): Matrix {
  if (Array.isArray(values)) return fromRows(values);
  if (values && typeof values === "object" && "data" in values) return values;
  throw new TypeError(`${what} must be a 2-D number array or Matrix`);
}

function targetsToMatrix(y: number[] | number[][] | Matrix, rows: number): Matrix {
  let m: Matrix;
  if (Array.isArray(y) && y.length > 0 && typeof y[0] === "number") {
    m = fromRows((y as number[]).map((v) => [v]));
  } else {
    m = toMatrix(y as number[][] | Matrix, "y");
  }
  if (m.rows !== rows) {
    throw new RangeError(`y has ${m.rows} rows but X has ${rows}`);
  }
  return m;
}

/**
 * Estimator-style client for the fracsolve solver.
 *
 * fit() drives the `fracsolve fit` CLI on temporary FRMX inputs and loads
 * the resulting artifacts, so the numbers exposed here are exactly the
 * numbers the CLI writes.  predict() and score() are computed client-side.
 */
export class FracRidge {
  readonly fracs: number[];
  readonly tol: number | undefined;
  readonly standardize: "none" | "center" | "zscore";

  private command: string[];
  private fitted = false;

  /** Coefficients in original predictor scale, dims [fractions, predictors, targets]. */
  coefs!: Cube;
  /** Resolved penalty per (fraction, target); +Infinity = full-regularization sentinel. */
  alphas!: Matrix;
  /** Fractions actually realized per (fraction, target). */
  achievedFractions!: Matrix;
  /** Per-(fraction, target) intercepts; only present when standardizing. */
  intercepts: Matrix | null = null;

  nPredictors = 0;
  nTargets = 0;

  constructor(options: FracRidgeOptions = {}) {
    this.fracs = options.fracs ? [...options.fracs] : [...DEFAULT_FRACS];
    this.tol = options.tol;
    this.standardize = options.standardize ?? "none";
    this.command = resolveCommand(options.command);
  }

  fit(X: number[][] | Matrix, y: number[] | number[][] | Matrix): this {
    const design = toMatrix(X, "X");
    const targets = targetsToMatrix(y, design.rows);

    const work = mkdtempSync(join(tmpdir(), "fracsolve-"));
    try {
      const designPath = join(work, "design.frmx");
      const targetsPath = join(work, "targets.frmx");
      writeFileSync(designPath, encodeFrmx(design));
      writeFileSync(targetsPath, encodeFrmx(targets));
      const outDir = join(work, "fit");
      const args = [
        "fit",
        "--design", designPath,
        "--targets", targetsPath,
        "--fracs", this.fracs.map((v) => String(v)).join(","),
        "--standardize", this.standardize,
        "--out", outDir,
      ];
      if (this.tol !== undefined) args.push("--tol", String(this.tol));
      runCli(this.command, args);
      this.loadArtifacts(outDir, design.cols, targets.cols);
    } finally {
      rmSync(work, { recursive: true, force: true });
    }
    this.fitted = true;
    return this;
  }

  /** Load fit artifacts from a CLI output directory without re-solving. */
  loadArtifacts(outDir: string, nPredictors: number, nTargets: number): this {
    const flat = decodeFrmx(readFileSync(join(outDir, "coefficients.frmx")));
    const f = this.fracs.length;
    if (flat.rows !== nPredictors || flat.cols !== f * nTargets) {
      throw new RangeError(
        `coefficients are ${flat.rows}x${flat.cols}, expected ` +
        `${nPredictors}x${f * nTargets}`
      );
    }
    // File columns are fraction-major (all targets for fraction 0, then 1, ...).
    const coefs = new Float64Array(f * nPredictors * nTargets);
    for (let p = 0; p < nPredictors; p++) {
      for (let i = 0; i < f; i++) {
        for (let t = 0; t < nTargets; t++) {
          coefs[(i * nPredictors + p) * nTargets + t] =
            flat.data[p * flat.cols + i * nTargets + t];
        }
      }
    }
    this.coefs = { dims: [f, nPredictors, nTargets], data: coefs };
    this.alphas = parseMatrixCsv(readFileSync(join(outDir, "alphas.csv"), "utf-8"));
    this.achievedFractions = parseMatrixCsv(
      readFileSync(join(outDir, "achieved_fractions.csv"), "utf-8")
    );
    const interceptPath = join(outDir, "intercepts.csv");
    this.intercepts = existsSync(interceptPath)
      ? parseMatrixCsv(readFileSync(interceptPath, "utf-8"))
      : null;
    this.nPredictors = nPredictors;
    this.nTargets = nTargets;
    this.fitted = true;
    return this;
  }

  private requireFitted(): void {
    if (!this.fitted) {
      throw new NotFittedError("call fit() before predict() or score()");
    }
  }

  /** Predictions for new rows, dims [rows, fractions, targets]. */
  predict(X: number[][] | Matrix): Cube {
    this.requireFitted();
    const Xn = toMatrix(X, "X");
    if (Xn.cols !== this.nPredictors) {
      throw new RangeError(
        `X has ${Xn.cols} predictors but the fit used ${this.nPredictors}`
      );
    }
    const f = this.fracs.length;
    const t = this.nTargets;
    const out = new Float64Array(Xn.rows * f * t);
    for (let n = 0; n < Xn.rows; n++) {
      for (let i = 0; i < f; i++) {
        for (let k = 0; k < t; k++) {
          let acc = 0;
          for (let p = 0; p < this.nPredictors; p++) {
            acc += at(Xn, n, p) * cubeAt(this.coefs, i, p, k);
          }
          if (this.intercepts) acc += at(this.intercepts, i, k);
          out[(n * f + i) * t + k] = acc;
        }
      }
    }
    return { dims: [Xn.rows, f, t], data: out };
  }

  /**
   * Coefficient of determination per (fraction, target) on held-out data,
   * measured against the test-set mean.
   */
  score(X: number[][] | Matrix, y: number[] | number[][] | Matrix): Matrix {
    this.requireFitted();
    const Xn = toMatrix(X, "X");
    const yn = targetsToMatrix(y, Xn.rows);
    if (yn.cols !== this.nTargets) {
      throw new RangeError(
        `y has ${yn.cols} targets but the fit used ${this.nTargets}`
      );
    }
    if (Xn.rows < 2) {
      throw new RangeError("need at least 2 observations to score");
    }
    const preds = this.predict(Xn);
    const f = this.fracs.length;
    const t = this.nTargets;
    const out = matrix(f, t);
    const resid = new Float64Array(Xn.rows);
    for (let k = 0; k < t; k++) {
      const yk = new Float64Array(Xn.rows);
      for (let n = 0; n < Xn.rows; n++) yk[n] = at(yn, n, k);
      const mean = pairwiseSum(yk) / Xn.rows;
      for (let n = 0; n < Xn.rows; n++) resid[n] = (yk[n] - mean) ** 2;
      const ssTot = pairwiseSum(resid);
      if (ssTot === 0) {
        throw new RangeError(`target ${k} has zero variance on the test set`);
      }
      for (let i = 0; i < f; i++) {
        for (let n = 0; n < Xn.rows; n++) {
          resid[n] = (yk[n] - cubeAt(preds, n, i, k)) ** 2;
        }
        out.data[i * t + k] = 1 - pairwiseSum(resid) / ssTot;
      }
    }
    return out;
  }
}
