"""Hot inner loops: numba-jitted by default, pure NumPy/Python fallback.

Set the environment variable RNLSLAB_NO_NUMBA=1 to force the fallback
path (same arithmetic, same step ordering; results agree to the last
few ulp).  ``benchmarks/bench_kernels.py`` compares the two paths.
"""

from __future__ import annotations

import os

import numpy as np

NUMBA_DISABLED = os.environ.get("RNLSLAB_NO_NUMBA", "").lower() in ("1", "true", "yes")

if not NUMBA_DISABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_DISABLED = True

USING_NUMBA = not NUMBA_DISABLED

# Event codes for the radial shot: the trajectory either crosses zero
# (amplitude too large), turns back up while still positive (too small),
# or reaches r_max undecided.
EVENT_NONE = 0
EVENT_CROSSED_ZERO = 1
EVENT_TURNED_UP = -1


def _shoot_classify_py(a, p, d, h, r_max, floor):
    """March u'' + ((d-1)/r) u' = 2(u - |u|^{p-1}u) from u(0)=a, u'(0)=0.

    Classic RK4 with fixed step h, seeded one step off the axis with the
    series u(h) = a + u''(0) h^2/2, u''(0) = 2(a - a^p)/d.  Returns
    (event, r_event).
    """
    u = a + (2.0 * (a - a**p) / d) * h * h * 0.5
    v = (2.0 * (a - a**p) / d) * h
    r = h
    n = int(round((r_max - h) / h))
    dm1 = d - 1.0
    for _ in range(n):
        # RK4 stages for (u, v); f_u = v, f_v = 2(u - |u|^{p-1} u) - (d-1)/r v
        k1u = v
        k1v = 2.0 * (u - np.sign(u) * abs(u) ** p) - dm1 / r * v
        rh = r + 0.5 * h
        u2 = u + 0.5 * h * k1u
        v2 = v + 0.5 * h * k1v
        k2u = v2
        k2v = 2.0 * (u2 - np.sign(u2) * abs(u2) ** p) - dm1 / rh * v2
        u3 = u + 0.5 * h * k2u
        v3 = v + 0.5 * h * k2v
        k3u = v3
        k3v = 2.0 * (u3 - np.sign(u3) * abs(u3) ** p) - dm1 / rh * v3
        r2 = r + h
        u4 = u + h * k3u
        v4 = v + h * k3v
        k4u = v4
        k4v = 2.0 * (u4 - np.sign(u4) * abs(u4) ** p) - dm1 / r2 * v4
        u = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        v = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        r = r2
        if u < 0.0:
            return EVENT_CROSSED_ZERO, r
        if v > 0.0 and u > floor:
            return EVENT_TURNED_UP, r
    return EVENT_NONE, r


def _shoot_profile_py(a, p, d, h, r_max, floor, out):
    """Same march as _shoot_classify_py but records u at every node.

    out[0] = u(0); out[i] = u(i*h).  Stops at the first event; returns
    (event, index of last written node).
    """
    out[0] = a
    u = a + (2.0 * (a - a**p) / d) * h * h * 0.5
    v = (2.0 * (a - a**p) / d) * h
    r = h
    out[1] = u
    n = out.shape[0] - 2
    dm1 = d - 1.0
    last = 1
    for i in range(n):
        k1u = v
        k1v = 2.0 * (u - np.sign(u) * abs(u) ** p) - dm1 / r * v
        rh = r + 0.5 * h
        u2 = u + 0.5 * h * k1u
        v2 = v + 0.5 * h * k1v
        k2u = v2
        k2v = 2.0 * (u2 - np.sign(u2) * abs(u2) ** p) - dm1 / rh * v2
        u3 = u + 0.5 * h * k2u
        v3 = v + 0.5 * h * k2v
        k3u = v3
        k3v = 2.0 * (u3 - np.sign(u3) * abs(u3) ** p) - dm1 / rh * v3
        r2 = r + h
        u4 = u + h * k3u
        v4 = v + h * k3v
        k4u = v4
        k4v = 2.0 * (u4 - np.sign(u4) * abs(u4) ** p) - dm1 / r2 * v4
        u = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        v = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        r = r2
        last = i + 2
        out[last] = u
        if u < 0.0:
            return EVENT_CROSSED_ZERO, last
        if v > 0.0 and u > floor:
            return EVENT_TURNED_UP, last
    return EVENT_NONE, last


def _nonlinear_phase_py(values, static_phase, mu_dt, pm1):
    """values *= exp(-i*(static_phase + mu_dt*|values|^pm1)), in place.

    static_phase carries dt*V; mu_dt carries dt*mu.  |values| is invariant
    under this flow, so the phase is exact.
    """
    absq = values.real**2 + values.imag**2
    if pm1 == 2.0:
        amp = absq
    else:
        amp = absq ** (pm1 * 0.5)
    values *= np.exp(-1j * (static_phase + mu_dt * amp))


if USING_NUMBA:
    _shoot_classify = njit(cache=True)(_shoot_classify_py)
    _shoot_profile = njit(cache=True)(_shoot_profile_py)

    @njit(cache=True)
    def _nonlinear_phase_jit(values, static_phase, mu_dt, pm1):
        flat = values.reshape(-1)
        ph = static_phase.reshape(-1)
        for i in range(flat.shape[0]):
            z = flat[i]
            absq = z.real * z.real + z.imag * z.imag
            if pm1 == 2.0:
                amp = absq
            else:
                amp = absq ** (pm1 * 0.5)
            theta = ph[i] + mu_dt * amp
            flat[i] = z * complex(np.cos(theta), -np.sin(theta))

    _nonlinear_phase = _nonlinear_phase_jit
else:
    _shoot_classify = _shoot_classify_py
    _shoot_profile = _shoot_profile_py
    _nonlinear_phase = _nonlinear_phase_py


def shoot_classify(a, p, d, h, r_max, floor=1e-12):
    return _shoot_classify(float(a), float(p), float(d), float(h), float(r_max), float(floor))


def shoot_profile(a, p, d, h, r_max, floor=1e-12):
    n_nodes = int(round(r_max / h)) + 1
    out = np.empty(n_nodes, dtype=np.float64)
    event, last = _shoot_profile(float(a), float(p), float(d), float(h), float(r_max), float(floor), out)
    return event, out[: last + 1]


def nonlinear_phase(values, static_phase, mu_dt, pm1):
    """In-place exact pointwise phase step of the potential+nonlinear flow."""
    _nonlinear_phase(values, static_phase, float(mu_dt), float(pm1))
