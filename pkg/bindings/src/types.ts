/** Shared types for the sphwav bindings. */

export type SamplingScheme = "gl" | "mw";

export type KernelFamily = "sd" | "needlet" | "bspline";

/** A sampled map: theta-major float64 samples on an iso-latitude grid. */
export interface BoundMap {
  scheme: SamplingScheme;
  /** Harmonic band-limit; the grid is L rings by 2L-1 longitudes. */
  L: number;
  /** Length L * (2L - 1) for real maps, interleaved (re, im) if complex. */
  values: Float64Array;
  isReal: boolean;
}

/** Harmonic coefficients: L^2 complex entries, interleaved (re, im). */
export interface BoundCoeffs {
  L: number;
  values: Float64Array;
}

export interface TransformParams {
  L: number;
  lambda: number;
  jmin?: number;
  family?: KernelFamily;
  multires?: boolean;
}

/** Scaling map plus one wavelet-coefficient map per scale. */
export interface BoundDecomposition {
  params: Required<TransformParams>;
  scaling: BoundMap;
  /** Ascending scale indices, aligned with `wavelets`. */
  scales: number[];
  wavelets: BoundMap[];
}

/** Bad flag combinations (CLI exit 1). */
export class UsageError extends Error {}

/** Missing or unreadable files (CLI exit 2). */
export class IoError extends Error {}

/** Malformed S2WM payloads (CLI exit 3 or local parsing). */
export class FormatError extends Error {}

/** Violated domain invariants such as scale ranges (CLI exit 4). */
export class ParameterError extends RangeError {}

export function gridSamples(L: number): number {
  return L * (2 * L - 1);
}
