export {
  BoundCoeffs,
  BoundDecomposition,
  BoundMap,
  FormatError,
  IoError,
  KernelFamily,
  ParameterError,
  SamplingScheme,
  TransformParams,
  UsageError,
  gridSamples,
} from "./types.js";
export { HEADER_SIZE, MAGIC, readCoeffs, readMap, writeCoeffs, writeMap } from "./s2wm.js";
export { cliCommand, runCli } from "./runner.js";
export { DenoiseResult, analysis, denoise, renderPpm, synthesis } from "./transform.js";
