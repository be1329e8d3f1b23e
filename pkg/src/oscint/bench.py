"""Quadrature strategy and kernel backend timings.

The CSV part (values, node counts, errors) is deterministic; timings are
reported separately because they are not.
"""
import math
import time

import numpy as np
from scipy.integrate import quad

from . import kernels
from .amplitude import Characteristic, SmoothBump
from .operator import OperatorSpec, evaluate_field, inner_integral, square_grid
from .quadrature import DEFAULT_CONFIG, SWEEP_CONFIG, brute_force_oracle, oracle_nodes, panel_rule

BENCH_POINT = (0.3, -0.2)


def _integrand(lam, x, y, psi):
    return lambda t: np.exp(1j * lam * (x * x * t + y * t * t)) * psi(x, y, t)


def _timed(fn):
    t0 = time.perf_counter()
    val = fn()
    return val, time.perf_counter() - t0


def quadrature_strategies(lams=(64, 256, 1024, 4096)):
    x, y = BENCH_POINT
    psi = SmoothBump(0.5, 1.0)
    rows, timings = [], []
    for lam in lams:
        spec = OperatorSpec(float(lam), cutoff=psi, f=Characteristic(0.0, 1.0))
        g = _integrand(lam, x, y, psi)
        ref, dt = _timed(lambda: inner_integral(spec, x, y, DEFAULT_CONFIG))
        n_panel = panel_rule((0.0, 1.0), 3 * lam, DEFAULT_CONFIG)[0].size
        cases = [("panel_gl", n_panel, ref, dt)]
        v, dt = _timed(lambda: inner_integral(spec, x, y, SWEEP_CONFIG))
        cases.append(("panel_gl_sweep", panel_rule((0.0, 1.0), 3 * lam, SWEEP_CONFIG)[0].size, v, dt))
        N = oracle_nodes(lam)
        v, dt = _timed(lambda: brute_force_oracle(g, (0.0, 1.0), N))
        cases.append(("simpson", N, v, dt))

        def scipy_quad():
            lim = max(50, int(4 * lam))
            re = quad(lambda t: g(t).real, 0.0, 1.0, limit=lim, epsabs=1e-12, epsrel=1e-12)[0]
            im = quad(lambda t: g(t).imag, 0.0, 1.0, limit=lim, epsabs=1e-12, epsrel=1e-12)[0]
            return complex(re, im)

        v, dt = _timed(scipy_quad)
        cases.append(("scipy_quad", 0, v, dt))
        for name, nodes, val, secs in cases:
            rows.append({"strategy": name, "lambda": float(lam), "nodes": nodes,
                         "re": val.real, "im": val.imag, "abs_err": abs(val - ref)})
            timings.append({"strategy": name, "lambda": float(lam), "seconds": secs})
    return rows, timings


def kernel_backends(lam=256.0, n=64):
    """Evaluate one field with each available backend; report max difference."""
    spec = OperatorSpec(float(lam), f=Characteristic(0.0, 1.0))
    grid = square_grid(n)
    previous = kernels.BACKEND
    results, timings = {}, []
    names = ["python"] + (["compiled"] if kernels.has_compiled() else [])
    try:
        for name in names:
            kernels.use_backend(name)
            fld, dt = _timed(lambda: evaluate_field(spec, grid, SWEEP_CONFIG))
            results[name] = fld.values
            timings.append({"strategy": f"field_{name}", "lambda": float(lam), "seconds": dt})
    finally:
        kernels.use_backend(previous)
    rows = []
    ref = results["python"]
    for name, vals in results.items():
        rows.append({"strategy": f"field_{name}", "lambda": float(lam), "nodes": n * n,
                     "re": float(vals.real.sum()), "im": float(vals.imag.sum()),
                     "abs_err": float(np.max(np.abs(vals - ref)))})
    return rows, timings


def speedup(timings):
    t = {r["strategy"]: r["seconds"] for r in timings}
    if "field_compiled" in t and "field_python" in t and t["field_compiled"] > 0:
        return t["field_python"] / t["field_compiled"]
    return math.nan
