#!/usr/bin/env node
/**
 * plot SNAPSHOT --panel both --out FIG.png [--colormap viridis]
 *               [--window x0,x1,y0,y1] [--size WxH]
 */

import { render, Panel } from "./render.js";
import { SnapshotFormatError, readSnapshot, windingCount } from "./snapshot.js";

function usage(): never {
  console.error(
    "usage: rnls-plot plot SNAPSHOT --panel modulus|phase|both --out FIG.png\n" +
      "           [--colormap viridis|jet] [--window x0,x1,y0,y1] [--size WxH]\n" +
      "       rnls-plot winding SNAPSHOT --radius R"
  );
  process.exit(2);
}

function parseArgs(argv: string[]): { positional: string[]; flags: Map<string, string> } {
  const positional: string[] = [];
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a.startsWith("--")) {
      const eq = a.indexOf("=");
      if (eq >= 0) {
        flags.set(a.slice(2, eq), a.slice(eq + 1));
      } else {
        const value = argv[i + 1];
        if (value === undefined) usage();
        flags.set(a.slice(2), value);
        i++;
      }
    } else {
      positional.push(a);
    }
  }
  return { positional, flags };
}

function main(argv: string[]): number {
  const { positional, flags } = parseArgs(argv);
  const command = positional[0];
  try {
    if (command === "plot") {
      const snapshotPath = positional[1];
      const outPath = flags.get("out");
      if (!snapshotPath || !outPath) usage();
      const panel = (flags.get("panel") ?? "both") as Panel;
      if (!["modulus", "phase", "both"].includes(panel)) usage();
      let window: [number, number, number, number] | undefined;
      if (flags.has("window")) {
        const parts = flags.get("window")!.split(",").map(Number);
        if (parts.length !== 4 || parts.some((v) => !Number.isFinite(v))) usage();
        window = parts as [number, number, number, number];
      }
      let panelWidth: number | undefined;
      let panelHeight: number | undefined;
      if (flags.has("size")) {
        const m = /^(\d+)x(\d+)$/.exec(flags.get("size")!);
        if (!m) usage();
        panelWidth = Number(m[1]);
        panelHeight = Number(m[2]);
      }
      const { width, height } = render({
        snapshotPath,
        outPath,
        panel,
        colormap: flags.get("colormap"),
        window,
        panelWidth,
        panelHeight,
      });
      console.log(`wrote ${outPath} (${width}x${height})`);
      return 0;
    }
    if (command === "winding") {
      const snapshotPath = positional[1];
      const radius = Number(flags.get("radius"));
      if (!snapshotPath || !Number.isFinite(radius)) usage();
      const snap = readSnapshot(snapshotPath);
      console.log(String(windingCount(snap, radius)));
      return 0;
    }
    usage();
  } catch (err) {
    if (err instanceof SnapshotFormatError) {
      console.error(`malformed snapshot: ${err.message}`);
      return 3;
    }
    throw err;
  }
}

process.exit(main(process.argv.slice(2)));
