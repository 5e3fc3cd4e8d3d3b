import assert from "node:assert/strict";
import { readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, dirname } from "node:path";
import { test } from "node:test";
import { fileURLToPath } from "node:url";

import { FormatError, HEADER_SIZE, gridSamples, readMap, writeMap } from "../src/index.js";

const fixtureDir = join(dirname(fileURLToPath(import.meta.url)), "..", "..", "fixtures");
const FIXTURE = join(fixtureDir, "random_L16.s2wm");

test("fixture parses with the documented header layout", () => {
  const map = readMap(FIXTURE);
  assert.equal(map.L, 16);
  assert.equal(map.scheme, "gl");
  assert.equal(map.isReal, true);
  assert.equal(map.values.length, gridSamples(16));
  const raw = readFileSync(FIXTURE);
  assert.equal(raw.length, HEADER_SIZE + 8 * gridSamples(16));
  assert.equal(raw.toString("ascii", 0, 4), "S2WM");
});

test("write/read round trip is bit-exact", () => {
  const original = readFileSync(FIXTURE);
  const map = readMap(FIXTURE);
  const copy = join(tmpdir(), `sphwav-copy-${process.pid}.s2wm`);
  writeMap(copy, map);
  assert.deepEqual(readFileSync(copy), original);
  const back = readMap(copy);
  assert.deepEqual(Array.from(back.values), Array.from(map.values));
});

test("synthetic map survives a round trip", () => {
  const L = 3;
  const values = new Float64Array(gridSamples(L));
  for (let i = 0; i < values.length; i++) values[i] = Math.sin(i) * 1e-3 + i;
  const path = join(tmpdir(), `sphwav-rt-${process.pid}.s2wm`);
  writeMap(path, { scheme: "gl", L, values, isReal: true });
  const back = readMap(path);
  assert.deepEqual(Array.from(back.values), Array.from(values));
});

test("corrupted magic is rejected", () => {
  const data = Buffer.from(readFileSync(FIXTURE));
  data.write("JUNK", 0, "ascii");
  const path = join(tmpdir(), `sphwav-bad-${process.pid}.s2wm`);
  writeFileSync(path, data);
  assert.throws(() => readMap(path), FormatError);
});

test("truncated payload is rejected", () => {
  const data = readFileSync(FIXTURE);
  const path = join(tmpdir(), `sphwav-trunc-${process.pid}.s2wm`);
  writeFileSync(path, data.subarray(0, data.length - 8));
  assert.throws(() => readMap(path), FormatError);
});

test("payload count mismatch is rejected", () => {
  const data = Buffer.from(readFileSync(FIXTURE));
  data.writeBigUInt64LE(7n, 14);
  const path = join(tmpdir(), `sphwav-count-${process.pid}.s2wm`);
  writeFileSync(path, data);
  assert.throws(() => readMap(path), FormatError);
});

test("length validation on write", () => {
  assert.throws(
    () => writeMap("/tmp/never.s2wm", {
      scheme: "gl", L: 4, values: new Float64Array(5), isReal: true,
    }),
    FormatError,
  );
});
