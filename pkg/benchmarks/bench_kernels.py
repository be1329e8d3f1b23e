"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--lam 256] [--grid 129] [--repeat 3]

Times the two hot kernels on realistic shapes and one full field evaluation,
and checks that the backends agree (bit-for-bit on the separable kernel).
"""
import argparse
import time

import numpy as np

from oscint import kernels
from oscint.amplitude import Characteristic
from oscint.operator import OperatorSpec, evaluate_field, square_grid
from oscint.phase import Phase
from oscint.quadrature import SWEEP_CONFIG


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--lam", type=float, default=256.0)
    ap.add_argument("--grid", type=int, default=129)
    ap.add_argument("--nodes", type=int, default=2000, help="quadrature nodes for the raw kernels")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    if not kernels.has_compiled():
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    kernels.set_threads(args.threads)
    rng = np.random.default_rng(0)
    n, m = args.grid, args.nodes
    a = np.exp(1j * rng.uniform(0, 6, (n, m))) * rng.uniform(0, 1, m)
    b = np.exp(1j * rng.uniform(0, 6, (m, n)))
    lin = rng.uniform(-args.lam, args.lam, n * n)
    quad = rng.uniform(-args.lam, args.lam, n * n)
    t = np.sort(rng.uniform(0, 1, m // 4))
    c = rng.standard_normal(t.size) + 0j
    spec_c = OperatorSpec(args.lam, f=Characteristic(0.0, 1.0))
    spec_g = OperatorSpec(args.lam, phase=Phase.general(1.0, 0.5, -0.3, 1.2), f=Characteristic(0.0, 1.0))
    grid = square_grid(n)

    cases = {
        f"separable_sum {n}x{m}x{n}": lambda: kernels.separable_sum(a, b),
        f"phase_sum {n * n} pts x {t.size}": lambda: kernels.phase_sum(lin, quad, t, c),
        f"field canonical {n}^2": lambda: evaluate_field(spec_c, grid, SWEEP_CONFIG).values,
        f"field general {n}^2": lambda: evaluate_field(spec_g, grid, SWEEP_CONFIG).values,
    }
    print(f"{'case':<34}{'python s':>11}{'compiled s':>12}{'speedup':>9}{'max diff':>11}")
    for name, fn in cases.items():
        kernels.use_backend("python")
        tp, vp = best_of(fn, args.repeat)
        kernels.use_backend("compiled")
        tc, vc = best_of(fn, args.repeat)
        diff = float(np.max(np.abs(vp - vc)))
        print(f"{name:<34}{tp:>11.4f}{tc:>12.4f}{tp / tc:>9.2f}{diff:>11.1e}")


if __name__ == "__main__":
    main()
