import { spawnSync } from "node:child_process";

import { CliError } from "./errors.js";

/**
 * Resolve the fracsolve command line.  FRACSOLVE_BIN may hold a multi-word
 * command (e.g. "python3 -m fracsolve.cli"); default is the installed
 * console script.
 */
export function resolveCommand(override?: string[]): string[] {
  if (override && override.length > 0) return override;
  const env = process.env.FRACSOLVE_BIN;
  if (env && env.trim().length > 0) return env.trim().split(/\s+/);
  return ["fracsolve"];
}

/** Run a fracsolve subcommand; throws CliError on non-zero exit. */
export function runCli(command: string[], args: string[]): void {
  const [bin, ...prefix] = command;
  const proc = spawnSync(bin, [...prefix, ...args], { encoding: "utf-8" });
  if (proc.error) {
    throw new CliError(`failed to spawn ${bin}: ${proc.error.message}`);
  }
  if (proc.status !== 0) {
    const stderr = (proc.stderr ?? "").trim().split("\n").pop() ?? "";
    throw new CliError(
      `fracsolve exited with code ${proc.status}: ${stderr}`,
      proc.status
    );
  }
}
