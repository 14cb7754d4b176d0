"""Canned run configurations for the reference experiments.

Keys follow the experiment families: free-profile scalings (source q0)
and unit-mass trapped/rotating minimizer scalings (source qog).  Each
preset is a plain config dict the CLI can run directly.
"""

from __future__ import annotations

import math

SQRT2 = math.sqrt(2.0)


def _evolve_preset(c, omega, gamma, source, half_width=15.0):
    # trapped runs use grids with h <= sigma_min/7 (sigma_j = gamma_j^{-1/2}),
    # so tightly squeezed states stay classifiable; see the README notes
    return {
        "command": "evolve",
        "d": 2,
        "p": 3.0,
        "mu": -1.0,
        "omega": [omega],
        "gamma": list(gamma),
        "c": c,
        "source": source,
        "half_width": half_width,
        "points": 256,
        "T": 2.0,
        "dt": 1e-3,
        "sample_every": 10,
    }


PRESETS = {
    # free-profile scalings
    "q0-0.98": _evolve_preset(0.98, 0.5, (1.0, SQRT2), "free_q0"),
    "q0-1.02": _evolve_preset(1.02, 0.5, (1.0, SQRT2), "free_q0"),
    "q0-0.99": _evolve_preset(0.99, 0.8, (1.0, 2.0), "free_q0"),
    "q0-1.03": _evolve_preset(1.03, 0.8, (1.0, 2.0), "free_q0"),
    # unit-mass trapped minimizer scalings
    "qog-1.0-om0.5-g2-8": _evolve_preset(1.0, 0.5, (2.0, 8.0), "trapped_q", 6.0),
    "qog-2.515-om0.5-g2-8": _evolve_preset(2.515, 0.5, (2.0, 8.0), "trapped_q", 6.0),
    "qog-2.415-om0.8-g1-r2": _evolve_preset(2.415, 0.8, (1.0, SQRT2), "trapped_q", 15.0),
    "qog-2.43-om0.8-g1-r2": _evolve_preset(2.43, 0.8, (1.0, SQRT2), "trapped_q", 15.0),
    "qog-2.48-om0.8-g1-2": _evolve_preset(2.48, 0.8, (1.0, 2.0), "trapped_q", 10.0),
    "qog-2.495-om0.8-g1-2": _evolve_preset(2.495, 0.8, (1.0, 2.0), "trapped_q", 10.0),
    "qog-2.44-om0.5-g1-2": _evolve_preset(2.44, 0.5, (1.0, 2.0), "trapped_q", 10.0),
    "qog-2.45-om0.5-g1-2": _evolve_preset(2.45, 0.5, (1.0, 2.0), "trapped_q", 10.0),
}
