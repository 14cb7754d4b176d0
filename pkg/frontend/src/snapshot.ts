/**
 * Reader for the bit-exact field snapshot format written by the solver.
 *
 * Layout (little-endian):
 *   bytes 0..3   magic "RNLS"
 *   u32          format version (= 1)
 *   u32          dimension d (1..3)
 *   per axis j:  u32 N_j, f64 L_j
 *   f64          time t
 *   then N_1*...*N_d samples as (re f64, im f64) pairs, row-major.
 */

import { readFileSync } from "node:fs";

export const MAGIC = "RNLS";
export const VERSION = 1;

export class SnapshotFormatError extends Error {}

export interface Snapshot {
  d: number;
  points: number[];
  halfWidth: number[];
  t: number;
  /** interleaved (re, im) pairs, row-major */
  samples: Float64Array;
}

export function parseSnapshot(buf: Buffer): Snapshot {
  if (buf.length < 12 || buf.toString("latin1", 0, 4) !== MAGIC) {
    throw new SnapshotFormatError("bad magic: not a field snapshot");
  }
  const version = buf.readUInt32LE(4);
  if (version !== VERSION) {
    throw new SnapshotFormatError(`unsupported format version ${version}`);
  }
  const d = buf.readUInt32LE(8);
  if (d < 1 || d > 3) {
    throw new SnapshotFormatError(`bad dimension ${d}`);
  }
  let off = 12;
  const points: number[] = [];
  const halfWidth: number[] = [];
  for (let j = 0; j < d; j++) {
    if (off + 12 > buf.length) throw new SnapshotFormatError("truncated axis table");
    points.push(buf.readUInt32LE(off));
    halfWidth.push(buf.readDoubleLE(off + 4));
    off += 12;
  }
  if (off + 8 > buf.length) throw new SnapshotFormatError("truncated header");
  const t = buf.readDoubleLE(off);
  off += 8;
  const n = points.reduce((a, b) => a * b, 1);
  const need = n * 16;
  if (buf.length - off !== need) {
    throw new SnapshotFormatError(
      `expected ${need} payload bytes, found ${buf.length - off}`
    );
  }
  // copy to an aligned Float64Array (the buffer offset may be unaligned)
  const samples = new Float64Array(2 * n);
  for (let i = 0; i < 2 * n; i++) {
    samples[i] = buf.readDoubleLE(off + 8 * i);
  }
  return { d, points, halfWidth, t, samples };
}

export function readSnapshot(path: string): Snapshot {
  return parseSnapshot(readFileSync(path));
}

/** Coordinate of node i along axis j: x = -L + i * (2L/N). */
export function axisCoord(snap: Snapshot, j: number, i: number): number {
  const L = snap.halfWidth[j];
  const N = snap.points[j];
  return -L + (2 * L * i) / N;
}

/** Row-major flat index of a 2D node (or a 2D slice of a 3D field). */
export function flatIndex2d(snap: Snapshot, i0: number, i1: number, i2 = 0): number {
  if (snap.d === 2) return i0 * snap.points[1] + i1;
  return (i0 * snap.points[1] + i1) * snap.points[2] + i2;
}

export function modulusSqAt(snap: Snapshot, flat: number): number {
  const re = snap.samples[2 * flat];
  const im = snap.samples[2 * flat + 1];
  return re * re + im * im;
}

export function phaseAt(snap: Snapshot, flat: number): number {
  return Math.atan2(snap.samples[2 * flat + 1], snap.samples[2 * flat]);
}

/**
 * Winding number of the phase along the circle of the given radius around
 * the origin (2D, or the x3 = 0 slice of 3D): accumulated wrapped phase
 * increments divided by 2 pi, rounded to the nearest integer.
 */
export function windingCount(snap: Snapshot, radius: number, samples = 720): number {
  if (snap.d < 2) throw new SnapshotFormatError("winding count needs d >= 2");
  const [N0, N1] = [snap.points[0], snap.points[1]];
  const i2 = snap.d === 3 ? snap.points[2] / 2 : 0;
  const h0 = (2 * snap.halfWidth[0]) / N0;
  const h1 = (2 * snap.halfWidth[1]) / N1;
  let total = 0;
  let prev: number | null = null;
  let first = 0;
  for (let k = 0; k <= samples; k++) {
    const theta = (2 * Math.PI * k) / samples;
    const x = radius * Math.cos(theta);
    const y = radius * Math.sin(theta);
    const i0 = Math.min(N0 - 1, Math.max(0, Math.round((x + snap.halfWidth[0]) / h0)));
    const i1 = Math.min(N1 - 1, Math.max(0, Math.round((y + snap.halfWidth[1]) / h1)));
    const ph = phaseAt(snap, flatIndex2d(snap, i0, i1, i2));
    if (prev === null) {
      first = ph;
      prev = ph;
      continue;
    }
    let diff = ph - prev;
    while (diff > Math.PI) diff -= 2 * Math.PI;
    while (diff <= -Math.PI) diff += 2 * Math.PI;
    total += diff;
    prev = ph;
  }
  return Math.round(total / (2 * Math.PI));
}
