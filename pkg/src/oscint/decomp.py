"""Cap decomposition, broad/narrow splitting, the rescaling identity, and the
bilinear change of variables (u, v) = (t + s, t^2 + s^2), each computed so
that both sides of the identity come from independent quadratures.
"""
import math
from dataclasses import dataclass, replace

import numpy as np

from .amplitude import ModulatedRescaled, Rescaled, Restricted
from .errors import CapsTooClose, GridMismatch, UnsupportedSupport
from .operator import Grid, GridField, OperatorSpec, evaluate_field, l2_norm_1d, lp_norm
from .quadrature import SWEEP_CONFIG, gauss_legendre, integrate_2d, panel_count, panel_rule


@dataclass
class CapDecomposition:
    K: int
    f: object
    caps: list

    def cap_interval(self, j):
        return j / self.K, (j + 1) / self.K

    def __iter__(self):
        return iter(self.caps)

    def __len__(self):
        return len(self.caps)


def cap_decompose(f, K):
    """Split f into K sharp restrictions f_j = f * chi_[j/K, (j+1)/K)."""
    if K < 1:
        raise ValueError("K must be >= 1")
    a, b = f.support
    if a < 0 or b > 1:
        raise UnsupportedSupport(f"support {f.support} is not inside [0, 1]")
    return CapDecomposition(K, f, [Restricted(f, j / K, (j + 1) / K) for j in range(K)])


def cap_fields(spec, decomposition, grid, cfg=SWEEP_CONFIG):
    return [evaluate_field(spec.with_f(fj), grid, cfg) for fj in decomposition]


# --- broad / narrow -----------------------------------------------------------

@dataclass
class BroadNarrowResult:
    alpha: float
    broad_mask: np.ndarray
    br_field: GridField
    full_abs: np.ndarray
    cap_abs: np.ndarray  # shape (K, nx, ny)

    @property
    def narrow_mask(self):
        return ~self.broad_mask

    @property
    def n_broad(self):
        return int(self.broad_mask.sum())


def broad_narrow(full, caps, alpha):
    """Classify nodes: broad iff max_j |T f_j| <= alpha |T f| and T f != 0."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    for c in caps:
        if c.grid != full.grid:
            raise GridMismatch("cap field lives on a different grid")
    full_abs = full.abs()
    cap_abs = np.stack([c.abs() for c in caps])
    cap_max = cap_abs.max(axis=0)
    broad = (full_abs > 0) & (cap_max <= alpha * full_abs)
    br = GridField(full.grid, np.where(broad, full_abs, 0.0))
    return BroadNarrowResult(alpha, broad, br, full_abs, cap_abs)


def pointwise_excess(result):
    """max over nodes of (|T f| - Br - max_j |T f_j| / alpha), relative to max |T f|.

    Non-positive means the pointwise inequality holds everywhere.
    """
    rhs = result.br_field.values.real + result.cap_abs.max(axis=0) / result.alpha
    scale = max(float(result.full_abs.max()), np.finfo(float).tiny)
    return float(np.max(result.full_abs - rhs) / scale)


def bilinear_domination(result, K):
    """At each broad node search all pairs |j - k| >= 2 for
    |T f| <= K |T f_j|^(1/2) |T f_k|^(1/2).

    Returns (number of broad nodes, number of broad nodes with no such pair).
    """
    idx = np.flatnonzero(result.broad_mask.ravel())
    if idx.size == 0:
        return 0, 0
    full = result.full_abs.ravel()[idx]
    caps = result.cap_abs.reshape(result.cap_abs.shape[0], -1)[:, idx]
    n = caps.shape[0]
    best = np.zeros(idx.size)
    for j in range(n):
        for k in range(n):
            if abs(j - k) >= 2:
                best = np.maximum(best, K * np.sqrt(caps[j] * caps[k]))
    return int(idx.size), int(np.sum(full > best))


# --- rescaling ----------------------------------------------------------------

def rescale_cap(spec, j, K, grid, cfg=SWEEP_CONFIG):
    """Both sides of |T_lam f_j (x, y)| = (1/K) |T_{lam/K}^{psi_j} f_{j,K} (x, y/K)|.

    The left side integrates f_j over its cap; the right side is a separate
    operator at frequency lam/K with the modulated cutoff psi_j and the
    rescaled function on [0, 1), evaluated on the y-compressed grid.
    """
    if not spec.phase.is_canonical:
        raise ValueError("rescaling identity is stated for the canonical phase")
    if not 0 <= j <= K - 1:
        raise ValueError("need 0 <= j <= K - 1")
    caps = cap_decompose(spec.f, K)
    left = evaluate_field(spec.with_f(caps.caps[j]), grid, cfg)
    psi_j = ModulatedRescaled(spec.cutoff, j, K, spec.lam, y_scale=K)
    spec_r = OperatorSpec(spec.lam / K, spec.phase, psi_j, Rescaled(spec.f, j, K))
    grid_r = Grid(grid.x_range, (grid.y_range[0] / K, grid.y_range[1] / K), grid.nx, grid.ny)
    right = evaluate_field(spec_r, grid_r, cfg)
    return GridField(grid, left.abs()), GridField(grid, right.abs() / K)


def rescale_deviation(left, right):
    """max |left - right| / max |left| (0 when both vanish)."""
    scale = float(np.max(np.abs(left.values)))
    diff = float(np.max(np.abs(left.values - right.values)))
    if scale == 0:
        return 0.0 if diff == 0 else math.inf
    return diff / scale


# --- bilinear change of variables --------------------------------------------

# The cutoff flattens like exp(-1/x) at cap corners, which in (u, v) sit on
# curved boundaries; 16 points per panel keep both sides at ~1e-12.
BILINEAR_CONFIG = replace(SWEEP_CONFIG, points_per_panel=16)

@dataclass
class BilinearData:
    j: int
    k: int
    K: int
    f: object

    def __post_init__(self):
        if abs(self.j - self.k) < 2:
            raise CapsTooClose(f"|j - k| = {abs(self.j - self.k)} < 2")
        self.fj = Restricted(self.f, self.j / self.K, (self.j + 1) / self.K)
        self.fk = Restricted(self.f, self.k / self.K, (self.k + 1) / self.K)
        self.sign = 1.0 if self.j > self.k else -1.0

    @property
    def t_cap(self):
        return self.j / self.K, (self.j + 1) / self.K

    @property
    def s_cap(self):
        return self.k / self.K, (self.k + 1) / self.K

    def to_ts(self, u, v):
        """Inverse map; t takes the + root when j > k."""
        r = np.sqrt(np.maximum(2 * v - u * u, 0.0))
        return 0.5 * (u + self.sign * r), 0.5 * (u - self.sign * r)

    def F(self, u, v):
        """F_{j,k}(u, v) = f_j(t) f_k(s) / (2 |t - s|)."""
        t, s = self.to_ts(u, v)
        return self.fj(t) * self.fk(s) / (2 * np.sqrt(2 * v - u * u))

    def v_limits(self, u):
        (a_j, b_j), (a_k, b_k) = self.t_cap, self.s_cap
        t_lo = np.maximum(a_j, u - b_k)
        t_hi = np.minimum(b_j, u - a_k)
        d_lo = (2 * t_lo - u) ** 2
        d_hi = (2 * t_hi - u) ** 2
        return 0.5 * (u * u + np.minimum(d_lo, d_hi)), 0.5 * (u * u + np.maximum(d_lo, d_hi))

    def uv_rule(self, rate_u, rate_v, cfg=SWEEP_CONFIG, t_breaks=(), s_breaks=()):
        """Nodes (u, v) and weights of a panel rule on the image of cap_j x cap_k.

        u is split where the v-limits have kinks; for each u node the v-range
        [v_lo(u), v_hi(u)] carries its own mapped panels. Breakpoints b in t or
        s become the curves v = b^2 + (u - b)^2, which split the v-range.
        """
        (a_j, b_j), (a_k, b_k) = self.t_cap, self.s_cap
        # F is singular on 2v = u^2, at least gap^2 / 2 below the image
        gap = (abs(self.j - self.k) - 1) / self.K
        cfg = replace(cfg, max_panel_width=min(cfg.max_panel_width, 0.5 * gap * gap))
        tb = [b for b in t_breaks if a_j < b < b_j]
        sb = [b for b in s_breaks if a_k < b < b_k]
        cuts = {a_j + a_k, a_j + b_k, b_j + a_k, b_j + b_k}
        cuts |= {b + a_k for b in tb} | {b + b_k for b in tb}
        cuts |= {a_j + b for b in sb} | {b_j + b for b in sb}
        lo_u, hi_u = a_j + a_k, b_j + b_k
        cuts = sorted(c for c in cuts if lo_u <= c <= hi_u)
        curves = np.array(tb + sb, dtype=float)
        gx, gw = gauss_legendre(cfg.points_per_panel)
        us, vs, ws = [], [], []
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            u, wu = panel_rule((lo, hi), rate_u, cfg)
            if u.size == 0:
                continue
            v_lo, v_hi = self.v_limits(u)
            inner = curves[None, :] ** 2 + (u[:, None] - curves[None, :]) ** 2
            inner = np.clip(inner, v_lo[:, None], v_hi[:, None])
            edges_v = np.sort(np.column_stack([v_lo, inner, v_hi]), axis=1)
            for p in range(edges_v.shape[1] - 1):
                base = edges_v[:, p]
                width = edges_v[:, p + 1] - base
                if not np.any(width > 0):
                    continue
                n = panel_count(float(width.max()), rate_v, cfg)
                edges = np.linspace(0.0, 1.0, n + 1)
                half = 0.5 * np.diff(edges)
                mid = 0.5 * (edges[:-1] + edges[1:])
                z = (mid[:, None] + half[:, None] * gx[None, :]).ravel()
                wz = (half[:, None] * gw[None, :]).ravel()
                us.append(np.repeat(u, z.size))
                vs.append((base[:, None] + width[:, None] * z[None, :]).ravel())
                ws.append((wu[:, None] * width[:, None] * wz[None, :]).ravel())
        return np.concatenate(us), np.concatenate(vs), np.concatenate(ws)


def _breaks(spec):
    return list(spec.f.breakpoints()) + list(spec.cutoff.t_breakpoints())


def _bilinear_direct(spec, data, x, y, cfg):
    lam, psi = spec.lam, spec.cutoff

    def g(t, s):
        ph = lam * (x * x * (t + s) + y * (t * t + s * s))
        return np.exp(1j * ph) * psi(x, y, t) * psi(x, y, s) * data.fj(t) * data.fk(s)

    tm = max(data.t_cap[1], data.s_cap[1])
    r = lam * (x * x + 2 * abs(y) * tm) + data.f.phase_rate()
    breaks = _breaks(spec)
    return integrate_2d(g, (data.t_cap, data.s_cap), lam, (r, r), cfg, (breaks, breaks))


def _bilinear_transformed(spec, data, x, y, cfg):
    lam, psi = spec.lam, spec.cutoff
    # dt/dv and ds/dv are at most K/2 on separated caps
    fr = data.f.phase_rate()
    breaks = _breaks(spec)
    u, v, w = data.uv_rule(lam * x * x + fr, lam * abs(y) + 0.5 * data.K * fr, cfg, breaks, breaks)
    t, s = data.to_ts(u, v)
    amp = psi(x, y, t) * psi(x, y, s)
    vals = np.exp(1j * lam * (x * x * u + y * v)) * amp * data.F(u, v)
    return complex(np.sum(w * vals))


def bilinear_change_of_vars(spec, j, k, K, xs, ys, cfg=BILINEAR_CONFIG):
    """The cap_j x cap_k bilinear integral at nodes (x_n, y_n), computed in
    (t, s) and, independently, in (u, v). Returns (direct, transformed)."""
    if not spec.phase.is_canonical:
        raise ValueError("change of variables is stated for the canonical phase")
    data = BilinearData(j, k, K, spec.f)
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    direct = np.array([_bilinear_direct(spec, data, x, y, cfg) for x, y in zip(xs, ys)])
    transformed = np.array([_bilinear_transformed(spec, data, x, y, cfg) for x, y in zip(xs, ys)])
    return direct, transformed


def F_norm_sq(f, j, k, K, cfg=SWEEP_CONFIG):
    """||F_{j,k}||^2 in L^2(du dv), integrated over the (u, v) image."""
    data = BilinearData(j, k, K, f)
    u, v, w = data.uv_rule(0.0, 0.0, cfg, f.breakpoints(), f.breakpoints())
    return float(np.sum(w * np.abs(data.F(u, v)) ** 2))


def F_norm_sq_ts(f, j, k, K, cfg=SWEEP_CONFIG):
    """Same quantity pulled back: int int |f_j(t) f_k(s)|^2 / (2 |t - s|) dt ds."""
    data = BilinearData(j, k, K, f)

    def g(t, s):
        return np.abs(data.fj(t) * data.fk(s)) ** 2 / (2 * np.abs(t - s))

    breaks = (f.breakpoints(), f.breakpoints())
    return integrate_2d(g, (data.t_cap, data.s_cap), 1.0, (0.0, 0.0), cfg, breaks).real


def cap_separation(f, K, slack=2.0, cfg=SWEEP_CONFIG):
    """Check ||F_jk||^2 <= slack * K/|j-k| * ||f_j||^2 ||f_k||^2 for all |j-k| >= 2.

    Returns a list of per-pair records.
    """
    caps = cap_decompose(f, K)
    l2sq = [l2_norm_1d(c) ** 2 for c in caps]
    rows = []
    for j in range(K):
        for k in range(K):
            if abs(j - k) < 2:
                continue
            lhs = F_norm_sq(f, j, k, K, cfg)
            bound = K / abs(j - k) * l2sq[j] * l2sq[k]
            rows.append({"j": j, "k": k, "F_norm_sq": lhs, "bound": bound,
                         "ratio": lhs / bound if bound else 0.0,
                         "pass": bool(lhs <= slack * bound)})
    return rows


# --- broad-part report --------------------------------------------------------

def broad_l4_report(spec, K, alpha, grid, cfg=SWEEP_CONFIG):
    """LHS = int Br^4 against lam^{-3/2} K^4 sum_{|j-k|>=2} ||F_jk||^2."""
    caps = cap_decompose(spec.f, K)
    full = evaluate_field(spec, grid, cfg)
    fields = cap_fields(spec, caps, grid, cfg)
    res = broad_narrow(full, fields, alpha)
    lhs = lp_norm(res.br_field, 4) ** 4
    total = 0.0
    for j in range(K):
        for k in range(K):
            if abs(j - k) >= 2:
                total += F_norm_sq(spec.f, j, k, K, cfg)
    rhs_core = spec.lam ** -1.5 * K**4 * total
    ratio = lhs / rhs_core if lhs > 0 else 0.0
    return {"lambda": spec.lam, "K": K, "alpha": alpha, "lhs": lhs,
            "rhs_core": rhs_core, "ratio": ratio, "n_broad": res.n_broad}
