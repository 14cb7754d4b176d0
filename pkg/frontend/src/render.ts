/**
 * Renders |psi|^2 heatmaps and phase maps from field snapshots.
 *
 * The modulus panel is scaled to [0, max|psi|^2]; the phase panel is fixed
 * to [-pi, pi] with no unwrapping (the banded look is intentional).
 * 3D snapshots render their x3 = 0 slice.  Output pixel dimensions follow
 * the request, independent of the grid size (nearest-neighbor sampling).
 */

import { writeFileSync } from "node:fs";

import { phaseWheel, sequential } from "./colormap.js";
import { encodePng } from "./png.js";
import {
  Snapshot,
  SnapshotFormatError,
  flatIndex2d,
  modulusSqAt,
  phaseAt,
  readSnapshot,
} from "./snapshot.js";

export type Panel = "modulus" | "phase" | "both";

export interface FigureRequest {
  snapshotPath: string;
  panel: Panel;
  outPath: string;
  colormap?: string;
  /** physical crop [x0, x1, y0, y1]; defaults to the full domain */
  window?: [number, number, number, number];
  /** pixel size of one panel */
  panelWidth?: number;
  panelHeight?: number;
}

interface PanelSpec {
  kind: "modulus" | "phase";
}

function samplePanel(
  snap: Snapshot,
  spec: PanelSpec,
  window: [number, number, number, number],
  width: number,
  height: number,
  colormap: string
): Uint8Array {
  const [x0, x1, y0, y1] = window;
  const N0 = snap.points[0];
  const N1 = snap.points[1];
  const h0 = (2 * snap.halfWidth[0]) / N0;
  const h1 = (2 * snap.halfWidth[1]) / N1;
  const i2 = snap.d === 3 ? snap.points[2] / 2 : 0;

  let peak = 0;
  if (spec.kind === "modulus") {
    for (let i0 = 0; i0 < N0; i0++) {
      for (let i1 = 0; i1 < N1; i1++) {
        peak = Math.max(peak, modulusSqAt(snap, flatIndex2d(snap, i0, i1, i2)));
      }
    }
    if (peak === 0) peak = 1;
  }
  const ramp = sequential(colormap);

  const out = new Uint8Array(width * height * 4);
  for (let py = 0; py < height; py++) {
    // image rows run top-down; physical y runs bottom-up
    const y = y1 - ((py + 0.5) / height) * (y1 - y0);
    const i1 = Math.min(N1 - 1, Math.max(0, Math.round((y + snap.halfWidth[1]) / h1)));
    for (let px = 0; px < width; px++) {
      const x = x0 + ((px + 0.5) / width) * (x1 - x0);
      const i0 = Math.min(N0 - 1, Math.max(0, Math.round((x + snap.halfWidth[0]) / h0)));
      const flat = flatIndex2d(snap, i0, i1, i2);
      let rgb: [number, number, number];
      if (spec.kind === "modulus") {
        rgb = ramp(modulusSqAt(snap, flat) / peak);
      } else {
        rgb = phaseWheel(phaseAt(snap, flat));
      }
      const o = 4 * (py * width + px);
      out[o] = rgb[0];
      out[o + 1] = rgb[1];
      out[o + 2] = rgb[2];
      out[o + 3] = 255;
    }
  }
  return out;
}

export function render(request: FigureRequest): { width: number; height: number } {
  const snap = readSnapshot(request.snapshotPath);
  if (snap.d === 1) {
    throw new SnapshotFormatError("1D snapshots are not renderable as panels");
  }
  const panelW = request.panelWidth ?? 480;
  const panelH = request.panelHeight ?? 480;
  const window =
    request.window ??
    ([-snap.halfWidth[0], snap.halfWidth[0], -snap.halfWidth[1], snap.halfWidth[1]] as [
      number,
      number,
      number,
      number
    ]);
  const colormap = request.colormap ?? "viridis";

  const panels: PanelSpec[] =
    request.panel === "both"
      ? [{ kind: "modulus" }, { kind: "phase" }]
      : [{ kind: request.panel }];

  const width = panelW * panels.length;
  const rgba = new Uint8Array(width * panelH * 4);
  panels.forEach((spec, idx) => {
    const tile = samplePanel(snap, spec, window, panelW, panelH, colormap);
    for (let y = 0; y < panelH; y++) {
      const src = tile.subarray(y * panelW * 4, (y + 1) * panelW * 4);
      rgba.set(src, 4 * (y * width + idx * panelW));
    }
  });

  writeFileSync(request.outPath, encodePng(width, panelH, rgba));
  return { width, height: panelH };
}
