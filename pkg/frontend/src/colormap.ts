/** Colormaps: sequential ramps for |psi|^2, a cyclic wheel for arg(psi). */

export type Rgb = [number, number, number];

const VIRIDIS_ANCHORS: Rgb[] = [
  [68, 1, 84],
  [71, 44, 122],
  [59, 81, 139],
  [44, 113, 142],
  [33, 144, 141],
  [39, 173, 129],
  [92, 200, 99],
  [170, 220, 50],
  [253, 231, 37],
];

const JET_ANCHORS: Rgb[] = [
  [0, 0, 131],
  [0, 60, 255],
  [0, 208, 255],
  [90, 255, 165],
  [255, 222, 0],
  [255, 60, 0],
  [128, 0, 0],
];

function rampLookup(anchors: Rgb[], t: number): Rgb {
  const x = Math.max(0, Math.min(1, t)) * (anchors.length - 1);
  const i = Math.min(anchors.length - 2, Math.floor(x));
  const f = x - i;
  const a = anchors[i];
  const b = anchors[i + 1];
  return [
    Math.round(a[0] + f * (b[0] - a[0])),
    Math.round(a[1] + f * (b[1] - a[1])),
    Math.round(a[2] + f * (b[2] - a[2])),
  ];
}

export function sequential(name: string): (t: number) => Rgb {
  const anchors = name === "jet" ? JET_ANCHORS : VIRIDIS_ANCHORS;
  return (t) => rampLookup(anchors, t);
}

/** Phase wheel: hue runs once around as the angle sweeps (-pi, pi]. */
export function phaseWheel(angle: number): Rgb {
  const h = (angle + Math.PI) / (2 * Math.PI); // 0..1
  const s = 0.9;
  const v = 0.95;
  const i = Math.floor(h * 6) % 6;
  const f = h * 6 - Math.floor(h * 6);
  const p = v * (1 - s);
  const q = v * (1 - f * s);
  const u = v * (1 - (1 - f) * s);
  const pick: Rgb[] = [
    [v, u, p],
    [q, v, p],
    [p, v, u],
    [p, q, v],
    [u, p, v],
    [v, p, q],
  ];
  const c = pick[i];
  return [Math.round(255 * c[0]), Math.round(255 * c[1]), Math.round(255 * c[2])];
}
