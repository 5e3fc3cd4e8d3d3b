/** Wavelet analysis, synthesis, denoising and rendering over the CLI.
 *
 * Data crosses the boundary as S2WM files in a scratch directory; the
 * arrays returned here are exactly what the CLI wrote.
 */
import { mkdtempSync, readFileSync, readdirSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { runCli } from "./runner.js";
import { readMap, writeMap } from "./s2wm.js";
import {
  BoundDecomposition,
  BoundMap,
  ParameterError,
  TransformParams,
  gridSamples,
} from "./types.js";

function withScratch<T>(fn: (dir: string) => T): T {
  const dir = mkdtempSync(join(tmpdir(), "sphwav-"));
  try {
    return fn(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

function fillParams(params: TransformParams): Required<TransformParams> {
  return {
    L: params.L,
    lambda: params.lambda,
    jmin: params.jmin ?? 0,
    family: params.family ?? "sd",
    multires: params.multires ?? true,
  };
}

function asRealMap(values: Float64Array, L: number): BoundMap {
  if (!Number.isInteger(L) || L < 1) {
    throw new ParameterError(`band-limit must be a positive integer, got ${L}`);
  }
  if (values.length !== gridSamples(L)) {
    throw new ParameterError(
      `array length ${values.length} does not match the L=${L} grid (${gridSamples(L)} samples)`,
    );
  }
  return { scheme: "gl", L, values, isReal: true };
}

function transformFlags(p: Required<TransformParams>): string[] {
  return [
    "--lambda", String(p.lambda),
    "--jmin", String(p.jmin),
    "--family", p.family,
    p.multires ? "--multires" : "--no-multires",
  ];
}

/** Decompose a real GL map into scaling and wavelet-coefficient maps. */
export function analysis(values: Float64Array, params: TransformParams): BoundDecomposition {
  const p = fillParams(params);
  const input = asRealMap(values, p.L);
  return withScratch((dir) => {
    const inPath = join(dir, "input.s2wm");
    writeMap(inPath, input);
    const prefix = join(dir, "out");
    runCli(["analyze", "--in", inPath, ...transformFlags(p), "--out-prefix", prefix]);

    const scaling = readMap(`${prefix}_scal.s2wm`);
    const scales = readdirSync(dir)
      .map((name) => /^out_wav_(\d+)\.s2wm$/.exec(name))
      .filter((m): m is RegExpExecArray => m !== null)
      .map((m) => Number(m[1]))
      .sort((a, b) => a - b);
    const wavelets = scales.map((j) => readMap(`${prefix}_wav_${j}.s2wm`));
    return { params: p, scaling, scales, wavelets };
  });
}

/** Reconstruct the map from a decomposition; exact to round-off. */
export function synthesis(decomp: BoundDecomposition): Float64Array {
  const p = decomp.params;
  return withScratch((dir) => {
    const prefix = join(dir, "in");
    writeMap(`${prefix}_scal.s2wm`, decomp.scaling);
    decomp.scales.forEach((j, i) => writeMap(`${prefix}_wav_${j}.s2wm`, decomp.wavelets[i]));
    const outPath = join(dir, "rec.s2wm");
    runCli([
      "synthesize", "--in-prefix", prefix,
      "--lambda", String(p.lambda), "--jmin", String(p.jmin), "--family", p.family,
      "--bandlimit", String(p.L), "--out", outPath,
    ]);
    return readMap(outPath).values;
  });
}

export interface DenoiseResult {
  values: Float64Array;
  /** Present when a reference map is supplied. */
  snrInDb?: number;
  snrOutDb?: number;
}

/** Hard-threshold denoising; optionally reports SNR against a reference. */
export function denoise(
  values: Float64Array,
  sigma: number,
  params: TransformParams,
  options: { factor?: number; reference?: Float64Array } = {},
): DenoiseResult {
  const p = fillParams(params);
  const input = asRealMap(values, p.L);
  return withScratch((dir) => {
    const inPath = join(dir, "noisy.s2wm");
    writeMap(inPath, input);
    const outPath = join(dir, "denoised.s2wm");
    const args = [
      "denoise", "--in", inPath, "--sigma", String(sigma),
      "--factor", String(options.factor ?? 3), ...transformFlags(p),
      "--out", outPath,
    ];
    if (options.reference) {
      const refPath = join(dir, "reference.s2wm");
      writeMap(refPath, asRealMap(options.reference, p.L));
      args.push("--reference", refPath);
    }
    const { stdout } = runCli(args);
    const result: DenoiseResult = { values: readMap(outPath).values };
    const snrIn = /snr_in_db=([-\d.einf]+)/.exec(stdout);
    const snrOut = /snr_out_db=([-\d.einf]+)/.exec(stdout);
    if (snrIn) result.snrInDb = Number(snrIn[1]);
    if (snrOut) result.snrOutDb = Number(snrOut[1]);
    return result;
  });
}

/** Render a real map to a binary PPM (P6) image. */
export function renderPpm(values: Float64Array, L: number, width = 400): Buffer {
  const input = asRealMap(values, L);
  return withScratch((dir) => {
    const inPath = join(dir, "map.s2wm");
    writeMap(inPath, input);
    const outPath = join(dir, "map.ppm");
    runCli(["plot", "--in", inPath, "--out", outPath, "--width", String(width)]);
    return readFileSync(outPath);
  });
}
