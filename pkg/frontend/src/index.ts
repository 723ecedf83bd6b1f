export { FracRidge, cubeAt } from "./estimator.js";
export type { Cube, FracRidgeOptions } from "./estimator.js";
export { CliError, NotFittedError } from "./errors.js";
export { decodeFrmx, encodeFrmx } from "./frmx.js";
export { formatField, formatMatrixCsv, parseField, parseMatrixCsv } from "./csv.js";
export { at, column, fromRows, matrix, pairwiseSum } from "./matrix.js";
export type { Matrix } from "./matrix.js";
export { resolveCommand, runCli } from "./runner.js";
