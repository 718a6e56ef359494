"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from charlift._kernels import _compiled, _fallback


def workloads(rng):
    logs = 1j * rng.uniform(0, 6, 5) + rng.uniform(-1, 1, 5)
    h = np.exp(1j * rng.uniform(0, 6, (4096, 3)) + rng.uniform(-2, 2, (4096, 3)))
    left = np.array([0, 1], dtype=np.int64)
    right = np.array([2, 3, 4], dtype=np.int64)
    return {
        "trapezoid_moment(k=3, nodes=4096)": lambda m: m.trapezoid_moment(3, 0.5 + 0.5j, 4096),
        "chamber_products(4096x3)": lambda m: m.chamber_products(h),
        "omega_sum(N=5)": lambda m: m.omega_sum(logs, left, right, 2.0, 3.0),
    }


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()
    if _compiled is None:
        raise SystemExit("compiled backend not available; build with `pip install -e . --no-build-isolation`")
    print(f"{'kernel':<36}{'fallback us':>14}{'compiled us':>14}{'speedup':>10}")
    for name, call in workloads(np.random.default_rng(0)).items():
        assert np.allclose(call(_fallback), call(_compiled))
        py = min(timeit.repeat(lambda: call(_fallback), number=args.repeat, repeat=3)) / args.repeat
        cy = min(timeit.repeat(lambda: call(_compiled), number=args.repeat, repeat=3)) / args.repeat
        print(f"{name:<36}{py * 1e6:>14.1f}{cy * 1e6:>14.1f}{py / cy:>9.1f}x")


if __name__ == "__main__":
    main()
