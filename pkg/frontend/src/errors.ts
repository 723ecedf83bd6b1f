/** Error thrown when predict/score is called before fit. */
export class NotFittedError extends Error {
  override name = "NotFittedError";
}

/** Error thrown when the fracsolve CLI exits non-zero or cannot be spawned. */
export class CliError extends Error {
  override name = "CliError";

  /** Exit code reported by the CLI, if it ran at all. */
  readonly exitCode: number | null;

  constructor(message: string, exitCode: number | null = null) {
    super(message);
    this.exitCode = exitCode;
  }
}
