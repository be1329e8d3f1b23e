"""Cutoffs psi(x, y, t) and test functions f(t).

Every cutoff factors as

    psi(x, y, t) = X(x) * Y(y) * T(t) * exp(i * gamma(y) * t)

which is what lets the operator evaluate whole grids as one matrix product.
``__call__`` never uses that factorization; it evaluates the defining
formula directly and is what the slow oracles call.
"""
import math

import numpy as np

from .errors import InvalidProfile


# --- smooth transition ----------------------------------------------------

def _glue_derivs(u):
    """g(u) = exp(-1/u) (0 for u <= 0) and its first three derivatives."""
    u = np.asarray(u, dtype=float)
    pos = u > 0
    up = np.where(pos, u, 1.0)
    g = np.where(pos, np.exp(-1.0 / up), 0.0)
    g1 = g / up**2
    g2 = g * (1 - 2 * up) / up**4
    g3 = g * (1 - 6 * up + 6 * up**2) / up**6
    return g, g1, g2, g3


def transition(u, order=0):
    """Smooth step s(u): 0 for u <= 0, 1 for u >= 1, C-infinity in between.

    ``order`` in 0..3 selects the derivative.
    """
    u = np.asarray(u, dtype=float)
    g, g1, g2, g3 = _glue_derivs(u)
    h, h1, h2, h3 = _glue_derivs(1.0 - u)
    D = g + h
    D1 = g1 - h1
    D2 = g2 + h2
    D3 = g3 - h3
    s = g / D
    if order == 0:
        return s
    s1 = (g1 - s * D1) / D
    if order == 1:
        return s1
    s2 = (g2 - 2 * s1 * D1 - s * D2) / D
    if order == 2:
        return s2
    if order == 3:
        return (g3 - 3 * s2 * D1 - 3 * s1 * D2 - s * D3) / D
    raise ValueError("order must be 0..3")


def bump(t, inner, outer, order=0):
    """Even bump: 1 on |t| <= inner, 0 on |t| >= outer, with derivatives."""
    t = np.asarray(t, dtype=float)
    w = outer - inner
    u = (outer - np.abs(t)) / w
    val = transition(u, order)
    if order:
        val = val * (-np.sign(t) / w) ** order
    return val


# --- cutoffs ----------------------------------------------------------------

class Cutoff:
    """Base class; subclasses provide the factor functions."""

    kind = "cutoff"
    derivative_bound = None

    def x_factor(self, x):
        raise NotImplementedError

    def y_factor(self, y):
        raise NotImplementedError

    def t_factor(self, t):
        raise NotImplementedError

    def t_modulation(self, y):
        """gamma(y): linear-in-t phase carried by the amplitude."""
        return np.zeros_like(np.asarray(y, dtype=float))

    def modulation_bound(self):
        return 0.0

    # half-widths of the (x, y) support; inf when unbounded
    extent = (math.inf, math.inf)
    t_support = (-math.inf, math.inf)

    def __call__(self, x, y, t):
        raise NotImplementedError

    def t_derivative(self, x, y, t, order):
        raise NotImplementedError

    def t_breakpoints(self):
        """Points in t where the amplitude is smooth but not analytic."""
        return []

    def describe(self):
        return {"kind": self.kind}


class One(Cutoff):
    kind = "one"

    def __init__(self):
        self.derivative_bound = {1: 0.0, 2: 0.0, 3: 0.0}

    def x_factor(self, x):
        return np.ones_like(np.asarray(x, dtype=float))

    y_factor = x_factor
    t_factor = x_factor

    def __call__(self, x, y, t):
        return np.ones(np.broadcast(x, y, t).shape)

    def t_derivative(self, x, y, t, order):
        return np.zeros(np.broadcast(x, y, t).shape)


class SmoothBump(Cutoff):
    """Tensor bump b(x) b(y) b(t), b = 1 on [-inner, inner], 0 off (-outer, outer)."""

    kind = "smooth_bump"

    def __init__(self, inner=0.5, outer=1.0):
        if not 0 < inner < outer:
            raise InvalidProfile(f"need 0 < inner < outer, got inner={inner}, outer={outer}")
        self.inner = float(inner)
        self.outer = float(outer)
        self.extent = (self.outer, self.outer)
        self.t_support = (-self.outer, self.outer)
        self.derivative_bound = measure_derivative_bounds(self)

    def _b(self, v, order=0):
        return bump(v, self.inner, self.outer, order)

    def x_factor(self, x):
        return self._b(x)

    def y_factor(self, y):
        return self._b(y)

    def t_factor(self, t):
        return self._b(t)

    def __call__(self, x, y, t):
        return self._b(x) * self._b(y) * self._b(t)

    def t_derivative(self, x, y, t, order):
        return self._b(x) * self._b(y) * self._b(t, order)

    def t_breakpoints(self):
        return [-self.outer, -self.inner, self.inner, self.outer]

    def describe(self):
        return {"kind": self.kind, "inner": self.inner, "outer": self.outer}


class ModulatedRescaled(Cutoff):
    """psi_j(x, y, s) = exp(2i lam j s y / K^2) * base(x, y, (s + j) / K).

    ``y_scale`` reads the amplitude at (x, y_scale * y, s); the rescaling
    identity evaluates the operator at y / K and needs y_scale = K to recover
    the original y inside psi_j.
    """

    kind = "modulated_rescaled"

    def __init__(self, base, j, K, lam, y_scale=1.0):
        if not (K >= 1 and 0 <= j <= K - 1 and lam > 0):
            raise InvalidProfile(f"need K >= 1, 0 <= j < K, lam > 0 (j={j}, K={K}, lam={lam})")
        self.base = base
        self.j = int(j)
        self.K = int(K)
        self.lam = float(lam)
        self.y_scale = float(y_scale)
        xe, ye = base.extent
        self.extent = (xe, ye / self.y_scale)
        lo, hi = base.t_support
        self.t_support = (lo * self.K - self.j, hi * self.K - self.j)
        self.derivative_bound = measure_derivative_bounds(self)

    def _gamma(self, y_orig):
        return 2.0 * self.lam * self.j * y_orig / self.K**2

    def x_factor(self, x):
        return self.base.x_factor(x)

    def y_factor(self, y):
        return self.base.y_factor(self.y_scale * np.asarray(y, dtype=float))

    def t_factor(self, s):
        return self.base.t_factor((np.asarray(s, dtype=float) + self.j) / self.K)

    def t_modulation(self, y):
        return self._gamma(self.y_scale * np.asarray(y, dtype=float))

    def t_breakpoints(self):
        return [b * self.K - self.j for b in self.base.t_breakpoints()]

    def modulation_bound(self):
        return abs(self._gamma(self.base.extent[1]))

    def __call__(self, x, y, s):
        y_orig = self.y_scale * np.asarray(y, dtype=float)
        s = np.asarray(s, dtype=float)
        return np.exp(1j * self._gamma(y_orig) * s) * self.base(x, y_orig, (s + self.j) / self.K)

    def t_derivative(self, x, y, s, order):
        # Leibniz on exp(i g s) * base(., (s + j) / K)
        y_orig = self.y_scale * np.asarray(y, dtype=float)
        s = np.asarray(s, dtype=float)
        g = self._gamma(y_orig)
        u = (s + self.j) / self.K
        total = 0.0
        for m in range(order + 1):
            d = self.base(x, y_orig, u) if m == 0 else self.base.t_derivative(x, y_orig, u, m)
            total = total + math.comb(order, m) * (1j * g) ** (order - m) * d / self.K**m
        return np.exp(1j * g * s) * total

    def describe(self):
        return {
            "kind": self.kind, "base": self.base.describe(), "j": self.j,
            "K": self.K, "lambda": self.lam, "y_scale": self.y_scale,
        }


def measure_derivative_bounds(cutoff, n=10_000, ny=21):
    """Sample sup |d^j psi / dt^j| for j = 1, 2, 3 over the class region.

    The t-range is the cutoff's t-support clipped to [-1, 1]; y is sampled on
    ``ny`` points of its support because the modulation depends on it.
    """
    lo, hi = cutoff.t_support
    lo, hi = max(lo, -1.0), min(hi, 1.0)
    if lo >= hi:
        return {1: 0.0, 2: 0.0, 3: 0.0}
    t = np.linspace(lo, hi, n)
    ye = min(cutoff.extent[1], 1.0)
    ys = np.linspace(-ye, ye, ny) if cutoff.modulation_bound() else np.zeros(1)
    out = {}
    for order in (1, 2, 3):
        vals = cutoff.t_derivative(0.0, ys[:, None], t[None, :], order)
        out[order] = float(np.max(np.abs(vals)))
    return out


def make_cutoff(kind="smooth_bump", **params):
    """Build a cutoff by profile name: 'smooth_bump', 'one' or 'modulated_rescaled'."""
    if kind == "smooth_bump":
        return SmoothBump(params.get("inner", 0.5), params.get("outer", 1.0))
    if kind == "one":
        return One()
    if kind == "modulated_rescaled":
        return ModulatedRescaled(**params)
    raise InvalidProfile(f"unknown cutoff profile {kind!r}")


def modulated_rescaled_cutoff(base, j, K, lam, y_scale=1.0):
    return ModulatedRescaled(base, j, K, lam, y_scale)


# --- test functions -------------------------------------------------------

class TestFunction:
    """A function of t that vanishes off ``support``."""

    __test__ = False  # keep pytest from collecting this class
    kind = "test_function"
    support = (0.0, 1.0)

    def _raw(self, t):
        raise NotImplementedError

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        a, b = self.support
        inside = self._inside(t)
        return np.where(inside, self._raw(np.where(inside, t, 0.5 * (a + b))), 0.0 + 0.0j)

    def _inside(self, t):
        a, b = self.support
        return (t >= a) & (t <= b)

    def breakpoints(self):
        """Interior points where f may fail to be smooth."""
        return []

    def phase_rate(self):
        """Bound on the oscillation rate of f itself, added to the panel sizing."""
        return 0.0

    def describe(self):
        return {"kind": self.kind, "support": list(self.support)}


class Zero(TestFunction):
    kind = "zero"

    def __init__(self, support=(0.0, 1.0)):
        self.support = tuple(float(v) for v in support)

    def _raw(self, t):
        return np.zeros_like(t, dtype=complex)


class Characteristic(TestFunction):
    """Indicator of the closed interval [a, b]."""

    kind = "characteristic"

    def __init__(self, a=0.0, b=1.0):
        if not a < b:
            raise ValueError("need a < b")
        self.support = (float(a), float(b))

    def _raw(self, t):
        return np.ones_like(t, dtype=complex)


class GaussBump(TestFunction):
    kind = "gauss_bump"

    def __init__(self, center, width, support=(0.0, 1.0)):
        self.center = float(center)
        self.width = float(width)
        self.support = tuple(float(v) for v in support)

    def _raw(self, t):
        return np.exp(-((t - self.center) ** 2) / (2 * self.width**2)) + 0j

    def describe(self):
        return {**super().describe(), "center": self.center, "width": self.width}


class Chirp(TestFunction):
    """exp(i mu t^2) on its support."""

    kind = "chirp"

    def __init__(self, mu, support=(0.0, 1.0)):
        self.mu = float(mu)
        self.support = tuple(float(v) for v in support)

    def _raw(self, t):
        return np.exp(1j * self.mu * t * t)

    def phase_rate(self):
        return 2 * abs(self.mu) * max(abs(v) for v in self.support)

    def describe(self):
        return {**super().describe(), "mu": self.mu}


class TrigPoly(TestFunction):
    """sum_n c_n exp(2 pi i n t), n = -degree..degree; seeded coefficients by default."""

    kind = "trig_poly"

    def __init__(self, coeffs=None, seed=0, degree=4, support=(0.0, 1.0)):
        if coeffs is None:
            rng = np.random.default_rng(seed)
            n = 2 * degree + 1
            coeffs = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2 * n)
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.seed = seed
        self.support = tuple(float(v) for v in support)
        d = (len(self.coeffs) - 1) // 2
        self._freqs = np.arange(-d, d + 1)

    def _raw(self, t):
        ph = np.exp(2j * np.pi * np.multiply.outer(t, self._freqs))
        return ph @ self.coeffs

    def phase_rate(self):
        return 2 * np.pi * float(self._freqs[-1])

    def describe(self):
        return {**super().describe(), "seed": self.seed, "degree": int(self._freqs[-1])}


class Sampled(TestFunction):
    """Linear interpolation of values on a uniform grid over [a, b]."""

    kind = "sampled"

    def __init__(self, values, interval=(0.0, 1.0)):
        self.values = np.asarray(values, dtype=complex)
        if self.values.ndim != 1 or len(self.values) < 2:
            raise ValueError("need at least two samples")
        self.interval = tuple(float(v) for v in interval)
        self.nodes = np.linspace(*self.interval, len(self.values))
        nz = np.flatnonzero(self.values)
        if len(nz) == 0:
            self.support = self.interval
        else:
            lo = max(nz[0] - 1, 0)
            hi = min(nz[-1] + 1, len(self.values) - 1)
            self.support = (float(self.nodes[lo]), float(self.nodes[hi]))

    def _raw(self, t):
        return (np.interp(t, self.nodes, self.values.real)
                + 1j * np.interp(t, self.nodes, self.values.imag))

    def breakpoints(self):
        a, b = self.support
        return [float(v) for v in self.nodes if a < v < b]

    def describe(self):
        return {**super().describe(), "n": len(self.values)}


class Restricted(TestFunction):
    """base * indicator of the half-open cap [a, b)."""

    kind = "restricted"

    def __init__(self, base, a, b):
        self.base = base
        self.cap = (float(a), float(b))
        lo = max(self.cap[0], base.support[0])
        hi = min(self.cap[1], base.support[1])
        self.empty = lo >= hi
        self.support = (lo, max(lo, hi))

    def _inside(self, t):
        a, b = self.cap
        return (t >= a) & (t < b) & (t >= self.base.support[0]) & (t <= self.base.support[1])

    def _raw(self, t):
        return self.base(t)

    def phase_rate(self):
        return self.base.phase_rate()

    def breakpoints(self):
        a, b = self.support
        return [v for v in self.base.breakpoints() if a < v < b]

    def describe(self):
        return {"kind": self.kind, "cap": list(self.cap), "base": self.base.describe()}


class Rescaled(TestFunction):
    """f_{j,K}(s) = chi_[0,1)(s) * base((s + j) / K)."""

    kind = "rescaled"

    def __init__(self, base, j, K):
        self.base = base
        self.j = int(j)
        self.K = int(K)
        lo = max(0.0, base.support[0] * K - j)
        hi = min(1.0, base.support[1] * K - j)
        self.support = (lo, max(lo, hi))

    def _inside(self, s):
        return (s >= 0.0) & (s < 1.0) & (s >= self.support[0]) & (s <= self.support[1])

    def _raw(self, s):
        return self.base((s + self.j) / self.K)

    def phase_rate(self):
        return self.base.phase_rate() / self.K

    def breakpoints(self):
        a, b = self.support
        pts = [v * self.K - self.j for v in self.base.breakpoints()]
        return [v for v in pts if a < v < b]

    def describe(self):
        return {"kind": self.kind, "j": self.j, "K": self.K, "base": self.base.describe()}


def eval_test(f, t):
    return f(t)


def load_test_function(path):
    """Read a uniform-grid test function from a text file.

    Columns are ``t value`` or ``t re im``; '#' starts a comment.
    """
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.shape[1] not in (2, 3) or data.shape[0] < 2:
        raise ValueError(f"{path}: expected 2 or 3 columns and at least 2 rows")
    t = data[:, 0]
    step = np.diff(t)
    if np.any(step <= 0) or np.ptp(step) > 1e-9 * max(1.0, abs(step[0])):
        raise ValueError(f"{path}: t column is not a uniform increasing grid")
    values = data[:, 1] if data.shape[1] == 2 else data[:, 1] + 1j * data[:, 2]
    return Sampled(values, (float(t[0]), float(t[-1])))
