"""Benchmark: compiled kernel vs the pure-NumPy fallback.

Times the raw 3x3 exponential kernels and one product-level workload (the
shape-operator grid of an equivariant patch, whose chart is dominated by
group exponentials inside finite-difference stencils).

Run:  python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

import hopflab._kernels as kernels
from hopflab._kernels import get_backend


def timeit(fn, repeat=5):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_raw(impl, n=50000):
    rng = np.random.default_rng(0)
    g1 = 1j * np.diag([1.0, 1.0, -2.0])
    g2 = np.array([[0, 0, 1], [0, 0, 1], [1, -1, 0]], dtype=complex)
    s1 = rng.uniform(-1, 1, n)
    s2 = rng.uniform(-1, 1, n)
    z = rng.standard_normal((n, 3)) + 1j * rng.standard_normal((n, 3))
    apply_t = timeit(lambda: impl.group_orbit_apply(g1, g2, s1, s2, z))
    ms = s1[:2000, None, None] * g1 + s2[:2000, None, None] * g2
    expm_t = timeit(lambda: impl.expm3_batch(ms))
    return apply_t, expm_t


def bench_patch(backend_name):
    """Shape-operator grid on a swept CMC patch under the given backend."""
    saved = kernels.group_orbit_apply
    kernels.group_orbit_apply = get_backend(backend_name).group_orbit_apply
    try:
        from hopflab.actions import load_action
        from hopflab.ambient import AmbientPoint
        from hopflab.constructor import CurveLaw, build_hypersurface, integrate_sigma
        from hopflab.hypersurface import shape_data

        spec = load_action("cp2-torus")
        z0 = spec.section.point(np.array([0.12, 0.07]))
        f1, f2 = spec.section.tangent_frame(z0)
        w0 = np.cos(0.45) * f1 + np.sin(0.45) * f2
        sigma = integrate_sigma(spec, AmbientPoint(spec.space, z0), w0,
                                CurveLaw("cmc", eta=1.0), n_steps=120)
        ehs = build_hypersurface(spec, sigma, s_extent=0.15)
        grid = ehs.patch.grid((12, 5, 5), margin=0.05)
        return timeit(lambda: shape_data(ehs.patch, grid), repeat=3)
    finally:
        kernels.group_orbit_apply = saved


def main():
    rows = []
    backends = ["python"]
    try:
        get_backend("cython")
        backends.append("cython")
    except ImportError:
        print("compiled kernel not available; benchmarking the fallback only")
    for name in backends:
        impl = get_backend(name)
        apply_t, expm_t = bench_raw(impl)
        patch_t = bench_patch(name)
        rows.append((name, apply_t, expm_t, patch_t))
    print(f"{'backend':10s} {'group_apply(50k)':>18s} {'expm3_batch(2k)':>16s} "
          f"{'shape grid(300pts)':>19s}")
    for name, a, e, p in rows:
        print(f"{name:10s} {a * 1e3:15.2f} ms {e * 1e3:13.2f} ms {p * 1e3:16.2f} ms")
    if len(rows) == 2:
        print(f"{'speedup':10s} {rows[0][1] / rows[1][1]:15.1f} x  "
              f"{rows[0][2] / rows[1][2]:12.1f} x  {rows[0][3] / rows[1][3]:15.1f} x")


if __name__ == "__main__":
    main()
