"""Time the numba kernels against the pure-numpy fallback and check they agree.

Run with ``python benchmarks/bench_backends.py [--repeat N]``. Both kernel sets
are called directly, so the ``WAVEFUNCTION_BACKEND`` flag does not matter here.
"""

import argparse
import timeit

import numpy as np

from wavefunction._accel import HAS_NUMBA
from wavefunction._kernels import KERNELS, recurrence_coefficients
from wavefunction.model import DENSITY_FLOOR


def cases(rng):
    # basis table: 1e5 points, K = 20
    x = rng.normal(scale=2.0, size=100_000)
    up20, down20 = recurrence_coefficients(20)
    yield "hermite_table n=1e5 K=20", lambda k: k["hermite_table"](x, up20, down20, True)

    # log-likelihood and gradient: the inner loop of a fit, n = 2500, K = 10
    up10, down10 = recurrence_coefficients(10)
    table = KERNELS["numpy"]["hermite_table"](rng.normal(size=2500) * 0.7, up10, down10, True)
    w = rng.normal(size=11)
    w /= np.linalg.norm(w)
    yield "loglik_grad n=2500 K=10", lambda k: k["loglik_grad"](table, w, DENSITY_FLOOR)

    # slice sampler: 2e4 draws from a K = 10 model
    def chain(k):
        gen = np.random.Generator(np.random.PCG64(0))
        return k["slice_chain"](w, up10, down10, 0.0, 4.0, 64, 100, 20_000, 1, gen)[0]

    yield "slice_chain 2e4 draws K=10", chain


def max_difference(a, b):
    """Largest difference relative to the largest magnitude, over all outputs."""
    if isinstance(a, tuple):
        return max(max_difference(u, v) for u, v in zip(a, b))
    a, b = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(a)), 1e-300))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    if not HAS_NUMBA:
        print("numba is not installed; nothing to compare")
        return 1
    rng = np.random.default_rng(0)
    print(f"{'kernel':<28} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8} {'rel. diff':>11}")
    for name, run in cases(rng):
        results = {b: run(KERNELS[b]) for b in ("numpy", "numba")}  # also warms up / compiles
        times = {}
        for b in ("numpy", "numba"):
            number = 1 if b == "numpy" and "slice" in name else 3
            best = min(timeit.repeat(lambda: run(KERNELS[b]), number=number, repeat=args.repeat))
            times[b] = 1e3 * best / number
        diff = max_difference(results["numpy"], results["numba"])
        print(f"{name:<28} {times['numpy']:>11.2f} {times['numba']:>11.2f} "
              f"{times['numpy'] / times['numba']:>7.1f}x {diff:>11.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
