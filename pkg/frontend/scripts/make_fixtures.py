"""Generates binary snapshot fixtures for the frontend test suite.

Everything here exercises the solver's public surfaces only: the snapshot
writer, the vortex builder and the evolve presets of the CLI.

    python3 scripts/make_fixtures.py OUTDIR [--with-presets]
"""

import json
import struct
import subprocess
import sys
from pathlib import Path

import numpy as np

from rnlslab import PhysParams, make_grid, make_vortex, write_snapshot
from rnlslab.field import ComplexField
from rnlslab.vortex import VortexSpec


def main(outdir: Path, with_presets: bool) -> None:
    outdir.mkdir(parents=True, exist_ok=True)

    # vortex snapshots for the winding-count check
    grid = make_grid(2, 15.0, 128)
    params = PhysParams(d=2, p=3.0, mu=-1.0, omega=(0.0,), gamma=(1.0, 1.0))
    for m in (1, 2, 3):
        psi = make_vortex(VortexSpec("iso2d", m, params), grid)
        write_snapshot(outdir / f"vortex_m{m}.rnls", psi, t=0.0)

    # small random field with a value table for the byte-exact parse check
    rng = np.random.default_rng(2024)
    small = make_grid(2, 3.0, 8)
    vals = rng.standard_normal(small.shape) + 1j * rng.standard_normal(small.shape)
    write_snapshot(outdir / "random_8x8.rnls", ComplexField(small, vals), t=0.75)
    probe = {
        "t": 0.75,
        "points": list(small.points),
        "half_width": list(small.half_width),
        "values": [
            {"i0": int(i0), "i1": int(i1), "re": float(vals[i0, i1].real), "im": float(vals[i0, i1].imag)}
            for i0, i1 in [(0, 0), (3, 5), (7, 7), (4, 2)]
        ],
    }
    (outdir / "random_8x8.json").write_text(json.dumps(probe, indent=1))

    # 3D snapshot (slice rendering)
    grid3 = make_grid(3, 6.0, 16)
    vals3 = np.exp(-grid3.radius_sq() / 2).astype(complex)
    write_snapshot(outdir / "gaussian_3d.rnls", ComplexField(grid3, vals3), t=0.0)

    # a deliberately truncated file
    raw = (outdir / "random_8x8.rnls").read_bytes()
    (outdir / "truncated.rnls").write_bytes(raw[: len(raw) - 9])

    if with_presets:
        for preset in ("q0-0.98", "q0-1.02", "q0-0.99", "q0-1.03"):
            rundir = outdir / f"preset-{preset}"
            subprocess.run(
                [
                    sys.executable,
                    "-m",
                    "rnlslab.cli",
                    "evolve",
                    "--preset",
                    preset,
                    "--output-dir",
                    str(rundir),
                ],
                check=True,
            )


if __name__ == "__main__":
    args = sys.argv[1:]
    if not args:
        raise SystemExit("usage: make_fixtures.py OUTDIR [--with-presets]")
    main(Path(args[0]), "--with-presets" in args[1:])
