"""Evaluation of T f(x, y) = int exp(i lam S(x, y, t)) psi(x, y, t) f(t) dt on grids, and grid norms."""
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .amplitude import SmoothBump
from .errors import EmptyDomain, GridMismatch
from .phase import Phase
from .quadrature import DEFAULT_CONFIG, panel_rule


@dataclass(frozen=True)
class OperatorSpec:
    lam: float
    phase: Phase = field(default_factory=Phase.canonical)
    cutoff: object = field(default_factory=SmoothBump)
    f: object = None

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        if self.f is None:
            raise ValueError("OperatorSpec needs a test function")

    def with_f(self, f):
        return OperatorSpec(self.lam, self.phase, self.cutoff, f)


@dataclass(frozen=True)
class Grid:
    x_range: tuple
    y_range: tuple
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs nx, ny >= 2")
        if not (self.x_range[0] < self.x_range[1] and self.y_range[0] < self.y_range[1]):
            raise ValueError("grid ranges must be increasing")

    @property
    def x(self):
        return np.linspace(self.x_range[0], self.x_range[1], self.nx)

    @property
    def y(self):
        return np.linspace(self.y_range[0], self.y_range[1], self.ny)

    @property
    def dx(self):
        return (self.x_range[1] - self.x_range[0]) / (self.nx - 1)

    @property
    def dy(self):
        return (self.y_range[1] - self.y_range[0]) / (self.ny - 1)


def square_grid(n, half_width=1.0):
    return Grid((-half_width, half_width), (-half_width, half_width), n, n)


def default_grid(lam, max_nodes=1025):
    """Uniform grid on [-1, 1]^2 with spacing <= min(1/32, 1/(4 lam)).

    The node count per axis is capped at ``max_nodes``; the spacing rule is
    only honoured up to lam = (max_nodes - 1) / 8.
    """
    h = min(1.0 / 32, 1.0 / (4 * lam))
    n = math.ceil(2.0 / h - 1e-9) + 1
    n = min(n, max_nodes)
    if n % 2 == 0:
        n += 1
    return square_grid(n)


@dataclass
class GridField:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid.nx, self.grid.ny):
            raise GridMismatch(
                f"values shape {self.values.shape} != grid {(self.grid.nx, self.grid.ny)}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field has non-finite entries")

    def abs(self):
        return np.abs(self.values)

    def to_csv(self, path):
        X, Y = np.meshgrid(self.grid.x, self.grid.y, indexing="ij")
        data = np.column_stack(
            [X.ravel(), Y.ravel(), self.values.real.ravel(), self.values.imag.ravel()]
        )
        np.savetxt(path, data, fmt="%.17g", delimiter=",", header="x,y,re,im", comments="")

    @classmethod
    def from_csv(cls, path):
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        xs = np.unique(data[:, 0])
        ys = np.unique(data[:, 1])
        grid = Grid((xs[0], xs[-1]), (ys[0], ys[-1]), len(xs), len(ys))
        vals = (data[:, 2] + 1j * data[:, 3]).reshape(len(xs), len(ys))
        return cls(grid, vals)


# --- evaluation -------------------------------------------------------------

def _t_interval(spec):
    lo = max(spec.f.support[0], spec.cutoff.t_support[0])
    hi = min(spec.f.support[1], spec.cutoff.t_support[1])
    return lo, hi


def _extent(value, coords):
    if math.isfinite(value):
        return value
    return max(1.0, float(np.max(np.abs(coords)))) if np.size(coords) else 1.0


def rate_bound(spec, xs=None, ys=None, local=False):
    """Upper bound on the t-oscillation rate of the integrand: |d/dt (lam S + gamma t)|
    over the cutoff support plus the rate of f itself.

    By default it depends only on the cutoff extents, so a point and a
    grid containing it share the same panels. ``local=True`` uses the given
    coordinates instead, for grids far smaller than the support.
    """
    xe, ye = spec.cutoff.extent
    if local:
        xm = min(xe, float(np.max(np.abs(xs))))
        ym = min(ye, float(np.max(np.abs(ys))))
    else:
        xm = _extent(xe, xs if xs is not None else 0.0)
        ym = _extent(ye, ys if ys is not None else 0.0)
    lo, hi = _t_interval(spec)
    tm = max(abs(lo), abs(hi))
    mod = float(np.max(np.abs(spec.cutoff.t_modulation(np.array([-ym, ym])))))
    if spec.phase.is_canonical:
        lin, quad = xm * xm, ym
    else:
        a, b, c, d = spec.phase.coeffs
        lin = (abs(c) * xm + abs(d) * ym) ** 2
        quad = abs(a) * xm + abs(b) * ym
    return spec.lam * (lin + 2 * quad * tm) + mod + spec.f.phase_rate()


def _t_rule(spec, xs, ys, cfg, local):
    lo, hi = _t_interval(spec)
    if not hi > lo:
        return np.zeros(0), np.zeros(0)
    rate = rate_bound(spec, xs, ys, local)
    breaks = spec.f.breakpoints() + spec.cutoff.t_breakpoints()
    t, w = panel_rule((lo, hi), rate, cfg, breaks)
    c = w * spec.cutoff.t_factor(t) * spec.f(t)
    return t, c


def _field_values(spec, xs, ys, cfg, sign, local):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    out = np.zeros((xs.size, ys.size), dtype=complex)
    t, c = _t_rule(spec, xs, ys, cfg, local)
    if t.size == 0:
        return out
    fx = spec.cutoff.x_factor(xs)
    fy = spec.cutoff.y_factor(ys)
    rows = np.flatnonzero(fx)
    cols = np.flatnonzero(fy)
    if rows.size == 0 or cols.size == 0:
        return out
    xr, yc = xs[rows], ys[cols]
    lam = sign * spec.lam
    gamma = sign * spec.cutoff.t_modulation(yc)
    if spec.phase.is_canonical:
        a = c[None, :] * np.exp(1j * (lam * xr * xr)[:, None] * t[None, :])
        b = np.exp(1j * ((lam * yc)[None, :] * (t * t)[:, None] + gamma[None, :] * t[:, None]))
        core = kernels.separable_sum(a, b)
    else:
        X, Y = np.meshgrid(xr, yc, indexing="ij")
        lin, quad = spec.phase.coefficients(X, Y)
        core = kernels.phase_sum(lam * lin + gamma[None, :], lam * quad, t, c)
    out[np.ix_(rows, cols)] = fx[rows][:, None] * fy[cols][None, :] * core
    return out


def inner_integral(spec, x, y, cfg=DEFAULT_CONFIG, sign=1):
    """T f at one point; ``sign=-1`` negates the phase."""
    return complex(_field_values(spec, [x], [y], cfg, sign, False)[0, 0])


def evaluate_field(spec, grid, cfg=DEFAULT_CONFIG, sign=1, local=False):
    return GridField(grid, _field_values(spec, grid.x, grid.y, cfg, sign, local))


def evaluate_points(spec, xs, ys, cfg=DEFAULT_CONFIG):
    """T f at scattered points (x_n, y_n), one t-rule shared by all points."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    out = np.zeros(xs.shape, dtype=complex)
    t, c = _t_rule(spec, xs, ys, cfg, False)
    if t.size == 0:
        return out
    gamma = spec.cutoff.t_modulation(ys)
    lin, quad = spec.phase.coefficients(xs, ys)
    core = kernels.phase_sum(spec.lam * lin + gamma, spec.lam * quad, t, c)
    return spec.cutoff.x_factor(xs) * spec.cutoff.y_factor(ys) * core


# --- norms --------------------------------------------------------------------

def _trapezoid_weights(n, h):
    w = np.full(n, h)
    w[0] = w[-1] = 0.5 * h
    return w


def lp_norm(field, p=4, domain=None):
    """Trapezoid L^p norm of a grid field, optionally restricted to a sub-rectangle."""
    if p < 1:
        raise ValueError("p must be >= 1")
    g = field.grid
    x, y = g.x, g.y
    if domain is None:
        domain = (g.x_range, g.y_range)
    (x0, x1), (y0, y1) = domain
    eps = 1e-12 * max(1.0, abs(x0), abs(x1), abs(y0), abs(y1))
    ix = np.flatnonzero((x >= x0 - eps) & (x <= x1 + eps))
    iy = np.flatnonzero((y >= y0 - eps) & (y <= y1 + eps))
    if x1 - x0 <= 0 or y1 - y0 <= 0 or ix.size < 2 or iy.size < 2:
        raise EmptyDomain(f"domain {domain} holds no cell of the grid")
    wx = _trapezoid_weights(ix.size, g.dx)
    wy = _trapezoid_weights(iy.size, g.dy)
    vals = np.abs(field.values[np.ix_(ix, iy)]) ** p
    total = np.sum((wx[:, None] * wy[None, :] * vals).ravel())
    return float(total ** (1.0 / p))


def norm_1d(f, p, n=20_001):
    """Trapezoid L^p norm of f over its support.

    The end nodes are pulled one ulp inside so half-open caps are sampled
    from within.
    """
    a, b = f.support
    if not b > a:
        return 0.0
    t = np.linspace(a, b, n)
    t[0] = np.nextafter(a, b)
    t[-1] = np.nextafter(b, a)
    w = _trapezoid_weights(n, (b - a) / (n - 1))
    return float(np.sum(w * np.abs(f(t)) ** p) ** (1.0 / p))


def l2_norm_1d(f, n=20_001):
    return norm_1d(f, 2, n)


def l4_norm_1d(f, n=20_001):
    return norm_1d(f, 4, n)
