"""Verification and sweep suites shared by the CLI and the acceptance tests.

Each runner returns ``(rows, passed)`` where rows are flat dicts ready for CSV.
"""
import math

import numpy as np

from .amplitude import Characteristic, TrigPoly
from .analytics import (
    Q_GRID_NODES, default_family, dyadic, estimate_q4_lower, extremizer_lower_bound,
    fit_decay, recursion_report,
)
from .decomp import (
    bilinear_change_of_vars, bilinear_domination, broad_l4_report, broad_narrow,
    cap_decompose, cap_fields, cap_separation, pointwise_excess, rescale_cap,
    rescale_deviation,
)
from .operator import OperatorSpec, default_grid, evaluate_field, square_grid

RESCALE_TOL = 1e-6
JACOBIAN_TOL = 1e-6
POINTWISE_TOL = 1e-12
CAP_SLACK = 2.0
EXTREMIZER_SLOPE = (-0.395, -0.355)
EXTREMIZER_MAX_RESID = 0.1
Q_SPREAD_MAX = 10.0
RECURSION_OCTAVE_MAX = 4.0


def make_test_function(name="chi", seed=0):
    if name == "chi":
        return Characteristic(0.0, 1.0)
    if name == "trig":
        return TrigPoly(seed=seed)
    raise ValueError(f"unknown test function {name!r}")


def run_rescale(K, lam, n=64, f=None):
    f = f or Characteristic(0.0, 1.0)
    spec = OperatorSpec(float(lam), f=f)
    grid = square_grid(n)
    rows = []
    for j in range(K):
        left, right = rescale_cap(spec, j, K, grid)
        dev = rescale_deviation(left, right)
        rows.append({"lambda": float(lam), "K": K, "j": j, "max_left": float(left.values.real.max()),
                     "rel_dev": dev, "pass": dev <= RESCALE_TOL})
    return rows, all(r["pass"] for r in rows)


def jacobian_nodes(seed, count=20):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-1.0, 1.0, size=(count, 2))
    return pts[:, 0], pts[:, 1]


def run_jacobian(K=8, lam=256.0, seed=7, count=20, f=None, ordered=False):
    f = f or Characteristic(0.0, 1.0)
    spec = OperatorSpec(float(lam), f=f)
    xs, ys = jacobian_nodes(seed, count)
    rows = []
    for j in range(K):
        for k in range(K):
            if abs(j - k) < 2 or (not ordered and j < k):
                continue
            direct, trans = bilinear_change_of_vars(spec, j, k, K, xs, ys)
            scale = np.abs(direct)
            diff = np.abs(direct - trans)
            rel = np.where(scale > 0, diff / np.where(scale > 0, scale, 1.0),
                           np.where(diff > 0, np.inf, 0.0))
            worst = float(rel.max())
            rows.append({"lambda": float(lam), "K": K, "j": j, "k": k,
                         "max_rel_dev": worst, "pass": worst <= JACOBIAN_TOL})
    return rows, all(r["pass"] for r in rows)


def run_capbound(K=8, f=None):
    f = f or Characteristic(0.0, 1.0)
    rows = cap_separation(f, K, CAP_SLACK)
    for r in rows:
        r["K"] = K
    return rows, all(r["pass"] for r in rows)


def run_broadnarrow(lam=256.0, K=8, alpha=1e-4, n=64, f=None):
    f = f or Characteristic(0.0, 1.0)
    spec = OperatorSpec(float(lam), f=f)
    grid = square_grid(n)
    caps = cap_decompose(f, K)
    full = evaluate_field(spec, grid)
    fields = cap_fields(spec, caps, grid)
    res = broad_narrow(full, fields, alpha)
    excess = pointwise_excess(res)
    n_broad, violations = bilinear_domination(res, K)
    recon = float(np.max(np.abs(sum(c.values for c in fields) - full.values)))
    row = {"lambda": float(lam), "K": K, "alpha": alpha, "nodes": n * n,
           "n_broad": n_broad, "pointwise_excess": excess,
           "domination_violations": violations, "reconstruction_err": recon,
           "pass": excess <= POINTWISE_TOL and violations == 0}
    return [row], row["pass"]


def run_broad_report(lams, K=8, alpha=1e-4, n=64, f=None):
    f = f or Characteristic(0.0, 1.0)
    rows = [broad_l4_report(OperatorSpec(float(l), f=f), K, alpha, square_grid(n)) for l in lams]
    ok = True
    for a, b in zip(rows, rows[1:]):
        if a["ratio"] > 0 and b["ratio"] > RECURSION_OCTAVE_MAX * a["ratio"]:
            ok = False
    return rows, ok


def running_slopes(lams, vals):
    out = []
    for i in range(len(lams)):
        if i < 2:
            out.append(math.nan)
        else:
            out.append(fit_decay(list(zip(lams[: i + 1], vals[: i + 1]))).slope)
    return out


def run_extremizer(lmin=64, lmax=65536, c1=0.125, c2=0.125):
    lams = dyadic(lmin, lmax)
    vals = [extremizer_lower_bound(l, c1, c2) for l in lams]
    slopes = running_slopes(lams, vals)
    rows = [{"lambda": l, "extremizer_lb": v, "normalized": v * l**0.375, "slope_running": s}
            for l, v, s in zip(lams, vals, slopes)]
    fit = fit_decay(list(zip(lams, vals)))
    ok = EXTREMIZER_SLOPE[0] <= fit.slope <= EXTREMIZER_SLOPE[1] and fit.max_residual <= EXTREMIZER_MAX_RESID
    return rows, fit, ok


def q4_sweep(lams, seed=0, cache=None):
    cache = {} if cache is None else cache
    out = []
    for l in lams:
        if l not in cache:
            cache[l] = estimate_q4_lower(l, default_family(l, seed)).value
        out.append(cache[l])
    return out


def run_decay(lmin=64, lmax=1024, seed=0, c1=0.125, c2=0.125, cache=None):
    lams = dyadic(lmin, lmax)
    if len(lams) < 3:
        raise ValueError("decay fit needs at least 3 dyadic lambdas")
    q = q4_sweep(lams, seed, cache)
    ext = [extremizer_lower_bound(l, c1, c2) for l in lams]
    slopes = running_slopes(lams, q)
    rows = [{"lambda": l, "q4_lower": a, "extremizer_lb": b, "slope_running": s}
            for l, a, b, s in zip(lams, q, ext, slopes)]
    normalized = [v * l**0.375 for l, v in zip(lams, q)]
    spread = max(normalized) / min(normalized)
    fits = {"q4_lower": fit_decay(list(zip(lams, q))).as_dict(),
            "extremizer_lb": fit_decay(list(zip(lams, ext))).as_dict(),
            "q4_normalized_spread": spread}
    return rows, fits, spread <= Q_SPREAD_MAX


def run_recursion(lam_maxes, K=8, seed=0, cache=None):
    cache = {} if cache is None else cache
    rows = [recursion_report(l, K, cache=cache, seed=seed) for l in lam_maxes]
    ok = True
    for a, b in zip(rows, rows[1:]):
        r = b["ratio"] / a["ratio"]
        if not (1 / RECURSION_OCTAVE_MAX <= r <= RECURSION_OCTAVE_MAX):
            ok = False
    return rows, ok


def q_grid(lam):
    return default_grid(lam, Q_GRID_NODES)
