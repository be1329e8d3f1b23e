import math

import numpy as np
import pytest

from oscint import (
    AscentConfig, Characteristic, GaussBump, NonPositiveValue, OperatorSpec, SmoothBump,
    estimate_q4_lower, evaluate_field, extremizer_lower_bound, fit_decay, lp_norm,
    recursion_report,
)
from oscint.amplitude import Zero
from oscint.analytics import default_family, dyadic
from oscint.operator import square_grid
from oscint.suites import EXTREMIZER_SLOPE, run_extremizer

Q256_SNAPSHOT = 2.1226448698478086  # value * lam^(3/8) at lam = 256, default family, seed 0


def test_fit_exact_power_law():
    lams = dyadic(64, 4096)
    fit = fit_decay([(l, l**-0.375) for l in lams])
    assert abs(fit.slope + 0.375) <= 1e-12
    assert fit.max_residual <= 1e-12


def test_fit_constant():
    fit = fit_decay([(l, 3.0) for l in (2, 4, 8, 16)])
    assert abs(fit.slope) <= 1e-12
    assert fit.intercept == pytest.approx(math.log2(3.0))


def test_fit_affine_equivariance():
    rng = np.random.default_rng(0)
    lams = dyadic(4, 1024)
    vals = rng.uniform(0.1, 2.0, len(lams))
    a = fit_decay(list(zip(lams, vals)))
    b = fit_decay(list(zip(lams, 8.0 * vals)))
    assert b.slope == pytest.approx(a.slope, abs=1e-12)
    assert b.intercept - a.intercept == pytest.approx(3.0, abs=1e-12)


def test_fit_errors():
    with pytest.raises(NonPositiveValue):
        fit_decay([(1, 1.0), (2, 0.0), (4, 1.0)])
    with pytest.raises(ValueError):
        fit_decay([(1, 1.0), (2, 1.0)])
    with pytest.raises(ValueError):
        dyadic(64, 100)


def test_box_area():
    # trapezoid weights integrate constants exactly, so the norm of 1 is area^(1/4)
    from oscint.operator import Grid, GridField
    lam, c1, c2 = 1024.0, 0.125, 0.2
    bx, by = c1 / math.sqrt(lam), c2 / lam
    g = Grid((-bx, bx), (-by, by), 64, 64)
    area = lp_norm(GridField(g, np.ones((64, 64))), 1)
    assert area == pytest.approx(4 * c1 * c2 * lam**-1.5, rel=1e-13)


@pytest.mark.parametrize("lam", [4.0, 64.0, 4096.0, 65536.0])
@pytest.mark.parametrize("c1,c2", [(0.125, 0.125), (0.25, 0.05)])
def test_extremizer_elementary_lower_bound(lam, c1, c2):
    assert extremizer_lower_bound(lam, c1, c2) >= 0.49 * (4 * c1 * c2) ** 0.25 * lam**-0.375


def test_extremizer_sweep_slope_and_band():
    rows, fit, ok = run_extremizer(64, 65536)
    assert EXTREMIZER_SLOPE[0] <= fit.slope <= EXTREMIZER_SLOPE[1]
    assert fit.max_residual <= 0.1
    norm = [r["normalized"] for r in rows]
    assert max(norm) / min(norm) <= 1.5
    assert ok


def test_extremizer_rejects_bad_constants():
    with pytest.raises(ValueError):
        extremizer_lower_bound(64.0, 0.3, 0.1)
    with pytest.raises(ValueError):
        extremizer_lower_bound(2.0)


def test_singleton_family_equals_its_ratio():
    lam = 32.0
    grid = square_grid(65)
    chi = Characteristic(0.0, 1.0)
    est = estimate_q4_lower(lam, [chi], grid=grid)
    spec = OperatorSpec(lam, cutoff=SmoothBump(0.5, 1.0), f=chi)
    from oscint.quadrature import SWEEP_CONFIG
    assert est.value == lp_norm(evaluate_field(spec, grid, SWEEP_CONFIG), 4)


def test_family_growth_is_monotone():
    grid = square_grid(65)
    fam = default_family(32.0)
    vals = [estimate_q4_lower(32.0, fam[: i + 1], grid=grid).value for i in range(len(fam))]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert vals[-1] >= vals[0]


def test_zero_norm_member_rejected():
    with pytest.raises(ValueError):
        estimate_q4_lower(32.0, [Zero()], grid=square_grid(9))


def test_ascent_never_worse():
    grid = square_grid(33)
    fam = [Characteristic(0.0, 1.0), GaussBump(0.5, 0.25)]
    base = estimate_q4_lower(16.0, fam, grid=grid)
    est = estimate_q4_lower(16.0, fam, ascent=AscentConfig(nodes=12, max_iter=40), grid=grid)
    assert est.value >= base.value
    assert est.trace == sorted(est.trace)
    assert len(est.trace) >= 2


@pytest.mark.slow
def test_q4_snapshot_at_256():
    est = estimate_q4_lower(256.0, seed=0)
    assert abs(est.value * 256**0.375 / Q256_SNAPSHOT - 1) <= 0.2
    chi_ratio = est.ratios[0]
    assert est.value >= chi_ratio


def test_recursion_well_defined():
    grid = lambda lam: square_grid(33)
    fam = lambda lam: [Characteristic(0.0, 1.0)]
    rep = recursion_report(64.0, 8, family_fn=fam, grid_fn=grid)
    assert rep["q_hi"] > 0 and rep["denominator"] > 0
    assert math.isfinite(rep["ratio"]) and rep["ratio"] > 0


def test_recursion_shares_cache():
    cache = {}
    grid = lambda lam: square_grid(17)
    fam = lambda lam: [Characteristic(0.0, 1.0)]
    recursion_report(256.0, 8, family_fn=fam, grid_fn=grid, cache=cache)
    recursion_report(512.0, 8, family_fn=fam, grid_fn=grid, cache=cache)
    assert set(cache) == {32.0, 64.0, 256.0, 512.0}


def test_recursion_lambda_floor():
    with pytest.raises(ValueError):
        recursion_report(16.0, 8)
