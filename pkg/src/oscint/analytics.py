"""Decay-rate estimation: lower bounds for the L^4 operator norm, the
concentrated-box lower bound for chi_[0,1], log-log fits and the
recursion diagnostic."""
import math
from dataclasses import dataclass, field

import numpy as np

from .amplitude import Characteristic, Chirp, GaussBump, Sampled, SmoothBump, TrigPoly
from .errors import NonPositiveValue
from .operator import Grid, GridField, OperatorSpec, default_grid, evaluate_field, l4_norm_1d, lp_norm
from .quadrature import SWEEP_CONFIG

Q_GRID_NODES = 513


@dataclass
class DecayFit:
    slope: float
    intercept: float
    max_residual: float
    points: list

    def as_dict(self):
        return {"slope": self.slope, "intercept": self.intercept,
                "max_residual": self.max_residual,
                "points": [[float(a), float(b)] for a, b in self.points]}


def fit_decay(points):
    """Least-squares line through (log2 lam, log2 value)."""
    pts = [(float(a), float(b)) for a, b in points]
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    lam = np.array([p[0] for p in pts])
    val = np.array([p[1] for p in pts])
    if np.any(val <= 0) or np.any(lam <= 0):
        raise NonPositiveValue("decay fit needs positive lambdas and values")
    if np.any(np.diff(lam) <= 0):
        raise ValueError("lambdas must be strictly increasing")
    X, Y = np.log2(lam), np.log2(val)
    slope, intercept = np.polyfit(X, Y, 1)
    resid = Y - (slope * X + intercept)
    return DecayFit(float(slope), float(intercept), float(np.max(np.abs(resid))), pts)


def dyadic(lmin, lmax):
    lo, hi = math.log2(lmin), math.log2(lmax)
    if lo != int(lo) or hi != int(hi):
        raise ValueError("lambda bounds must be powers of two")
    return [2.0**e for e in range(int(lo), int(hi) + 1)]


# --- box lower bound ---------------------------------------------------------

def extremizer_lower_bound(lam, c1=0.125, c2=0.125, n=64, cfg=SWEEP_CONFIG):
    """L^4 norm of T chi_[0,1] over the box |x| <= c1 lam^-1/2, |y| <= c2 lam^-1."""
    if lam < 4:
        raise ValueError("need lam >= 4")
    if not (0 < c1 <= 0.25 and 0 < c2 <= 0.25):
        raise ValueError("need 0 < c1, c2 <= 1/4")
    bx = c1 / math.sqrt(lam)
    by = c2 / lam
    grid = Grid((-bx, bx), (-by, by), n, n)
    spec = OperatorSpec(float(lam), cutoff=SmoothBump(0.5, 1.0), f=Characteristic(0.0, 1.0))
    fld = evaluate_field(spec, grid, cfg, local=True)
    return lp_norm(fld, 4)


def extremizer_sweep(lmin=64, lmax=65536, c1=0.125, c2=0.125):
    lams = dyadic(lmin, lmax)
    vals = [extremizer_lower_bound(l, c1, c2) for l in lams]
    return lams, vals


# --- Q4 lower bounds ---------------------------------------------------------

def default_family(lam, seed=0):
    fam = [Characteristic(0.0, 1.0)]
    fam += [GaussBump(0.5, 2.0**-w) for w in range(1, 5)]
    fam += [Chirp(lam * r) for r in (0.25, 0.5, 1.0)]
    fam += [TrigPoly(seed=seed + i) for i in range(8)]
    return fam


@dataclass
class AscentConfig:
    nodes: int = 64
    max_iter: int = 200
    step: float = 0.5
    min_step: float = 1e-3


@dataclass
class QEstimate:
    lam: float
    value: float
    argmax: dict
    ratios: list = field(default_factory=list)
    trace: list = field(default_factory=list)


def _ratio(spec, grid, cfg):
    fn = l4_norm_1d(spec.f)
    if not fn > 0:
        raise ValueError(f"test function {spec.f.describe()} has zero L4 norm")
    return lp_norm(evaluate_field(spec, grid, cfg), 4) / fn


def _ascent(spec, grid, cfg, start, acfg):
    """Coordinate ascent over hat-function coefficients on [0, 1].

    T is linear, so the fields of the hat basis are computed once and every
    trial value costs one weighted sum.
    """
    n = acfg.nodes
    nodes = np.linspace(0.0, 1.0, n)
    coeffs = np.asarray(start(nodes), dtype=complex)
    basis = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        basis.append(evaluate_field(spec.with_f(Sampled(e)), grid, cfg).values)
    basis = np.stack(basis)

    def score(c):
        f = Sampled(c)
        fn = l4_norm_1d(f)
        if not fn > 0:
            return 0.0
        return lp_norm(GridField(grid, np.tensordot(c, basis, axes=1)), 4) / fn

    best = score(coeffs)
    step = acfg.step
    trace = [best]
    it = 0
    while it < acfg.max_iter and step >= acfg.min_step:
        improved = False
        for i in range(n):
            it += 1
            for delta in (step, -step):
                trial = coeffs.copy()
                trial[i] += delta
                val = score(trial)
                if val > best:
                    coeffs, best, improved = trial, val, True
                    break
            if it >= acfg.max_iter:
                break
        trace.append(best)
        if not improved:
            step *= 0.5
    return best, Sampled(coeffs), trace


def estimate_q4_lower(lam, family=None, ascent=None, grid=None, cfg=SWEEP_CONFIG, seed=0):
    """Best ||T f||_4 / ||f||_4 over the family (and optional ascent)."""
    if family is None:
        family = default_family(lam, seed)
    if not family:
        raise ValueError("family must be nonempty")
    grid = grid or default_grid(lam, Q_GRID_NODES)
    base = OperatorSpec(float(lam), cutoff=SmoothBump(0.5, 1.0), f=family[0])
    ratios = [_ratio(base.with_f(f), grid, cfg) for f in family]
    i = int(np.argmax(ratios))
    est = QEstimate(float(lam), float(ratios[i]), family[i].describe(), ratios)
    if ascent is not None:
        val, f_best, trace = _ascent(base, grid, cfg, family[i], ascent)
        est.trace = trace
        if val > est.value:
            est.value = float(val)
            est.argmax = {"kind": "ascent", "start": family[i].describe(), **f_best.describe()}
    return est


def recursion_report(lam_max, K, family_fn=None, grid_fn=None, cache=None, seed=0):
    """Q(lam) / (K lam^-3/8 + K^-1/2 Q(lam/K)) with lower-bound estimates of Q."""
    if lam_max / K < 4:
        raise ValueError("need lam_max / K >= 4")
    cache = {} if cache is None else cache

    def q(lam):
        if lam not in cache:
            fam = family_fn(lam) if family_fn else default_family(lam, seed)
            grid = grid_fn(lam) if grid_fn else None
            cache[lam] = estimate_q4_lower(lam, fam, grid=grid).value
        return cache[lam]

    q_hi = q(float(lam_max))
    q_lo = q(float(lam_max) / K)
    denom = K * lam_max**-0.375 + K**-0.5 * q_lo
    return {"lambda": float(lam_max), "K": K, "q_hi": q_hi, "q_lo": q_lo,
            "denominator": denom, "ratio": q_hi / denom}
