/** Reader/writer for the S2WM binary format.
 *
 * Layout (little-endian): magic "S2WM" (4) | version u32 | scheme u8
 * (0 = GL, 1 = MW) | L u32 | kind u8 (0 real map, 1 complex map,
 * 2 harmonic coeffs) | payload_count u64, then payload_count float64
 * values (real) or (re, im) pairs (complex), theta-major.
 */
import { readFileSync, writeFileSync } from "node:fs";

import {
  BoundCoeffs,
  BoundMap,
  FormatError,
  SamplingScheme,
  gridSamples,
} from "./types.js";

export const MAGIC = "S2WM";
export const HEADER_SIZE = 22;

const KIND_REAL_MAP = 0;
const KIND_COMPLEX_MAP = 1;
const KIND_COEFFS = 2;

const SCHEME_CODE: Record<SamplingScheme, number> = { gl: 0, mw: 1 };
const CODE_SCHEME: Record<number, SamplingScheme> = { 0: "gl", 1: "mw" };

interface Header {
  scheme: number;
  L: number;
  kind: number;
  count: number;
}

function packHeader(scheme: number, L: number, kind: number, count: number): Buffer {
  const buf = Buffer.alloc(HEADER_SIZE);
  buf.write(MAGIC, 0, "ascii");
  buf.writeUInt32LE(1, 4);
  buf.writeUInt8(scheme, 8);
  buf.writeUInt32LE(L, 9);
  buf.writeUInt8(kind, 13);
  buf.writeBigUInt64LE(BigInt(count), 14);
  return buf;
}

function parseHeader(path: string, data: Buffer): Header {
  if (data.length < HEADER_SIZE) {
    throw new FormatError(`${path}: shorter than the ${HEADER_SIZE}-byte header`);
  }
  if (data.toString("ascii", 0, 4) !== MAGIC) {
    throw new FormatError(`${path}: not an S2WM file`);
  }
  const version = data.readUInt32LE(4);
  if (version !== 1) {
    throw new FormatError(`${path}: unsupported version ${version}`);
  }
  const count = data.readBigUInt64LE(14);
  if (count > BigInt(Number.MAX_SAFE_INTEGER)) {
    throw new FormatError(`${path}: payload_count ${count} too large`);
  }
  return {
    scheme: data.readUInt8(8),
    L: data.readUInt32LE(9),
    kind: data.readUInt8(13),
    count: Number(count),
  };
}

function payloadFloats(path: string, data: Buffer, count: number, width: number): Float64Array {
  const expected = count * width * 8;
  const body = data.subarray(HEADER_SIZE);
  if (body.length !== expected) {
    throw new FormatError(`${path}: payload holds ${body.length} bytes, expected ${expected}`);
  }
  // Copy out of the Buffer so alignment and lifetime are our own.
  const out = new Float64Array(count * width);
  for (let i = 0; i < out.length; i++) out[i] = body.readDoubleLE(i * 8);
  return out;
}

export function readMap(path: string): BoundMap {
  const data = readFileSync(path);
  const h = parseHeader(path, data);
  if (h.kind !== KIND_REAL_MAP && h.kind !== KIND_COMPLEX_MAP) {
    throw new FormatError(`${path}: kind ${h.kind} is not a map`);
  }
  const scheme = CODE_SCHEME[h.scheme];
  if (scheme === undefined) {
    throw new FormatError(`${path}: unknown sampling scheme code ${h.scheme}`);
  }
  if (h.L < 1 || h.count !== gridSamples(h.L)) {
    throw new FormatError(
      `${path}: payload_count ${h.count} does not match grid (${gridSamples(h.L)} samples)`,
    );
  }
  const isReal = h.kind === KIND_REAL_MAP;
  return {
    scheme,
    L: h.L,
    values: payloadFloats(path, data, h.count, isReal ? 1 : 2),
    isReal,
  };
}

export function writeMap(path: string, map: BoundMap): void {
  const samples = gridSamples(map.L);
  const width = map.isReal ? 1 : 2;
  if (map.values.length !== samples * width) {
    throw new FormatError(
      `map has ${map.values.length} floats, expected ${samples * width} for L=${map.L}`,
    );
  }
  const header = packHeader(
    SCHEME_CODE[map.scheme],
    map.L,
    map.isReal ? KIND_REAL_MAP : KIND_COMPLEX_MAP,
    samples,
  );
  const body = Buffer.alloc(map.values.length * 8);
  for (let i = 0; i < map.values.length; i++) body.writeDoubleLE(map.values[i], i * 8);
  writeFileSync(path, Buffer.concat([header, body]));
}

export function readCoeffs(path: string): BoundCoeffs {
  const data = readFileSync(path);
  const h = parseHeader(path, data);
  if (h.kind !== KIND_COEFFS) {
    throw new FormatError(`${path}: kind ${h.kind} is not a coefficient set`);
  }
  if (h.L < 1 || h.count !== h.L * h.L) {
    throw new FormatError(`${path}: payload_count ${h.count} does not match band-limit ${h.L}`);
  }
  return { L: h.L, values: payloadFloats(path, data, h.count, 2) };
}

export function writeCoeffs(path: string, coeffs: BoundCoeffs): void {
  if (coeffs.values.length !== coeffs.L * coeffs.L * 2) {
    throw new FormatError(
      `coefficients hold ${coeffs.values.length} floats, expected ${coeffs.L * coeffs.L * 2}`,
    );
  }
  const header = packHeader(0, coeffs.L, KIND_COEFFS, coeffs.L * coeffs.L);
  const body = Buffer.alloc(coeffs.values.length * 8);
  for (let i = 0; i < coeffs.values.length; i++) body.writeDoubleLE(coeffs.values[i], i * 8);
  writeFileSync(path, Buffer.concat([header, body]));
}
