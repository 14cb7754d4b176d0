import { execFileSync } from "node:child_process";
import { existsSync, readFileSync } from "node:fs";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { beforeAll, describe, expect, it } from "vitest";

import {
  SnapshotFormatError,
  parseSnapshot,
  readSnapshot,
  flatIndex2d,
  windingCount,
} from "../src/snapshot.js";

const FIXTURES = resolve(__dirname, "fixtures");

beforeAll(() => {
  if (!existsSync(join(FIXTURES, "random_8x8.rnls"))) {
    execFileSync("python3", [resolve(__dirname, "../scripts/make_fixtures.py"), FIXTURES], {
      cwd: resolve(__dirname, ".."),
      stdio: "inherit",
    });
  }
}, 120_000);

describe("snapshot parsing", () => {
  it("reads solver-written snapshots byte-exactly", () => {
    const snap = readSnapshot(join(FIXTURES, "random_8x8.rnls"));
    const probe = JSON.parse(readFileSync(join(FIXTURES, "random_8x8.json"), "utf8"));
    expect(snap.d).toBe(2);
    expect(snap.points).toEqual(probe.points);
    expect(snap.halfWidth).toEqual(probe.half_width);
    expect(snap.t).toBe(probe.t);
    for (const v of probe.values) {
      const flat = flatIndex2d(snap, v.i0, v.i1);
      // bit-exact doubles, no tolerance
      expect(snap.samples[2 * flat]).toBe(v.re);
      expect(snap.samples[2 * flat + 1]).toBe(v.im);
    }
  });

  it("rejects truncated files", () => {
    const buf = readFileSync(join(FIXTURES, "truncated.rnls"));
    expect(() => parseSnapshot(buf)).toThrow(SnapshotFormatError);
  });

  it("rejects bad magic", () => {
    const buf = Buffer.alloc(64);
    buf.write("JUNK", 0, "latin1");
    expect(() => parseSnapshot(buf)).toThrow(SnapshotFormatError);
  });

  it("rejects wrong version", () => {
    const good = readFileSync(join(FIXTURES, "random_8x8.rnls"));
    const bad = Buffer.from(good);
    bad.writeUInt32LE(7, 4);
    expect(() => parseSnapshot(bad)).toThrow(/version/);
  });

  it("parses 3D snapshots", () => {
    const snap = readSnapshot(join(FIXTURES, "gaussian_3d.rnls"));
    expect(snap.d).toBe(3);
    expect(snap.points).toEqual([16, 16, 16]);
    // center value of exp(-|x|^2/2) is 1
    const c = flatIndex2d(snap, 8, 8, 8);
    expect(snap.samples[2 * c]).toBeCloseTo(1.0, 12);
  });
});

describe("winding count", () => {
  it.each([1, 2, 3])("recovers m = %d on the vortex ring", (m) => {
    const snap = readSnapshot(join(FIXTURES, `vortex_m${m}.rnls`));
    // ring radius sqrt(m/gamma) with gamma = 1
    expect(windingCount(snap, Math.sqrt(m))).toBe(m);
  });

  it("sees zero winding on a real field", () => {
    const snap = readSnapshot(join(FIXTURES, "gaussian_3d.rnls"));
    expect(windingCount(snap, 1.0)).toBe(0);
  });
});
