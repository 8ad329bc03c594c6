"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--sizes 256 512 1024]
"""

import argparse
import timeit

import numpy as np

from eur import _kernels_py

try:
    from eur import _kernels
except ImportError:
    _kernels = None


def _cases(n, rng):
    psi = rng.normal(size=n) + 1j * rng.normal(size=n)
    rho = np.outer(psi, psi.conj())
    p = np.exp(-np.linspace(-6, 6, n) ** 2)
    return {
        "wigner_correlation_pure": (psi,),
        "wigner_correlation_density": (rho,),
        "heat_steps": (p, 0.45, 0.01, 2000, False),
    }


def _best(fn, args, repeat):
    fn(*args)
    times = timeit.repeat(lambda: fn(*args), number=1, repeat=repeat)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sizes", type=int, nargs="+", default=[256, 512, 1024])
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; only the numpy fallback is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':28s} {'n':>6s} {'numpy [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s}")
    for n in args.sizes:
        for name, call_args in _cases(n, rng).items():
            t_py = _best(getattr(_kernels_py, name), call_args, args.repeat)
            if _kernels is None:
                print(f"{name:28s} {n:6d} {1e3 * t_py:12.3f} {'-':>12s} {'-':>8s}")
                continue
            t_cy = _best(getattr(_kernels, name), call_args, args.repeat)
            print(f"{name:28s} {n:6d} {1e3 * t_py:12.3f} {1e3 * t_cy:12.3f} {t_py / t_cy:8.1f}")


if __name__ == "__main__":
    main()
