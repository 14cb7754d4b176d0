"""Compare the numba-jitted hot kernels against the pure-NumPy fallback.

Run twice to see both paths:

    python benchmarks/bench_kernels.py            # jitted (default)
    RNLSLAB_NO_NUMBA=1 python benchmarks/bench_kernels.py

The numbers are medians over repeats; the shooting case uses a reduced
radial extent so the fallback finishes quickly.
"""

import time

import numpy as np

from rnlslab import kernels


def median_time(fn, repeats=5):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return sorted(times)[len(times) // 2]


def main():
    path = "numba" if kernels.USING_NUMBA else "numpy fallback"
    print(f"kernel path: {path}")

    # warmup (and JIT compile on the numba path)
    kernels.shoot_classify(2.0, 3.0, 2, 1e-3, 1.0)
    t = median_time(lambda: kernels.shoot_classify(2.2, 3.0, 2, 1e-4, 8.0))
    print(f"shoot_classify (r_max=8, h=1e-4):      {t * 1e3:9.2f} ms")

    t = median_time(lambda: kernels.shoot_profile(2.2, 3.0, 2, 1e-4, 8.0))
    print(f"shoot_profile  (r_max=8, h=1e-4):      {t * 1e3:9.2f} ms")

    rng = np.random.default_rng(0)
    values = (rng.standard_normal((256, 256)) + 1j * rng.standard_normal((256, 256))).astype(
        np.complex128
    )
    phase = rng.standard_normal((256, 256))
    work = values.copy()
    kernels.nonlinear_phase(work, phase, -1e-3, 2.0)

    def run_phase():
        w = values.copy()
        for _ in range(20):
            kernels.nonlinear_phase(w, phase, -1e-3, 2.0)

    t = median_time(run_phase)
    print(f"nonlinear_phase (256^2, 20 steps):     {t * 1e3:9.2f} ms")


if __name__ == "__main__":
    main()
