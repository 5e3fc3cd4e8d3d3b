/** Locates and invokes the sphwav command-line tool.
 *
 * The bindings never compute transforms themselves; every operation is the
 * CLI run against S2WM files, so results are byte-identical to direct CLI
 * use.  Exit codes map to typed errors: 1 usage, 2 I/O, 3 format,
 * 4 parameter invariant.
 */
import { execFileSync } from "node:child_process";

import { FormatError, IoError, ParameterError, UsageError } from "./types.js";

let resolved: string[] | null = null;

function candidates(): string[][] {
  const env = process.env.SPHWAV_CLI;
  if (env) return [env.split(/\s+/)];
  return [["sphwav"], ["python3", "-m", "sphwav"]];
}

/** Command vector for the CLI, probed once and cached. */
export function cliCommand(): string[] {
  if (resolved) return resolved;
  for (const cand of candidates()) {
    try {
      execFileSync(cand[0], [...cand.slice(1), "--help"], { stdio: "pipe" });
      resolved = cand;
      return cand;
    } catch {
      // try the next candidate
    }
  }
  throw new IoError(
    "sphwav CLI not found; install the Python package or set SPHWAV_CLI",
  );
}

export interface RunResult {
  stdout: string;
}

export function runCli(args: string[]): RunResult {
  const cmd = cliCommand();
  try {
    const stdout = execFileSync(cmd[0], [...cmd.slice(1), ...args], {
      stdio: ["ignore", "pipe", "pipe"],
      encoding: "utf8",
    });
    return { stdout };
  } catch (err: any) {
    const status: number | null = err?.status ?? null;
    const detail = (err?.stderr ?? "").toString().trim() || err?.message || "CLI failed";
    switch (status) {
      case 1:
        throw new UsageError(detail);
      case 2:
        throw new IoError(detail);
      case 3:
        throw new FormatError(detail);
      case 4:
        throw new ParameterError(detail);
      default:
        throw new Error(`sphwav exited with ${status}: ${detail}`);
    }
  }
}
