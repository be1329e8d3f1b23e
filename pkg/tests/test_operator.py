import math

import numpy as np
import pytest
from scipy.special import erf

from oscint import (
    Characteristic, EmptyDomain, GaussBump, Grid, GridField, GridMismatch, One, OperatorSpec,
    Phase, SmoothBump, TrigPoly, Zero, evaluate_field, inner_integral, l2_norm_1d, l4_norm_1d,
    lp_norm, reduce_general,
)
from oscint.amplitude import Restricted
from oscint.operator import default_grid, evaluate_points, square_grid


def test_zero_function(bump):
    spec = OperatorSpec(100.0, cutoff=bump, f=Zero())
    assert inner_integral(spec, 0.3, 0.1) == 0
    assert not np.any(evaluate_field(spec, square_grid(5)).values)


def test_analytic_point():
    spec = OperatorSpec(100.0, cutoff=One(), f=Characteristic(0.0, 1.0))
    got = inner_integral(spec, 0.5, 0.0)
    assert abs(got - (np.exp(25j) - 1) / 25j) <= 1e-10


def test_two_by_two_grid_bitwise(spec256):
    grid = Grid((-0.4, 0.7), (-0.2, 0.3), 2, 2)
    fld = evaluate_field(spec256, grid).values
    for i, x in enumerate(grid.x):
        for j, y in enumerate(grid.y):
            assert fld[i, j] == inner_integral(spec256, x, y)


def test_scattered_points_match_grid(spec256):
    grid = square_grid(9)
    fld = evaluate_field(spec256, grid).values
    X, Y = np.meshgrid(grid.x, grid.y, indexing="ij")
    np.testing.assert_allclose(evaluate_points(spec256, X, Y), fld, atol=1e-13)


def test_general_phase_reduces_to_canonical(rng):
    gen = Phase.general(0.8, -0.4, 0.3, 0.9)
    change, _ = reduce_general(gen)
    f = TrigPoly(seed=4)
    spec_g = OperatorSpec(200.0, phase=gen, cutoff=One(), f=f)
    spec_c = OperatorSpec(200.0, cutoff=One(), f=f)
    for x, y in rng.uniform(-1, 1, size=(10, 2)):
        X, Y = change(x, y)
        assert abs(inner_integral(spec_g, x, y) - inner_integral(spec_c, X, Y)) <= 1e-10


def test_modulus_bound(rng, bump):
    f = TrigPoly(seed=9)
    t = np.linspace(0, 1, 100_001)
    sup_f = np.max(np.abs(f(t)))
    spec = OperatorSpec(300.0, cutoff=bump, f=f)
    for x, y in rng.uniform(-1.2, 1.2, size=(50, 2)):
        assert abs(inner_integral(spec, x, y)) <= 1.0 * sup_f * 1.0 + 1e-12


def test_conjugation_symmetry(rng, bump):
    spec = OperatorSpec(256.0, cutoff=bump, f=GaussBump(0.4, 0.2))
    for x, y in rng.uniform(-1, 1, size=(20, 2)):
        a = inner_integral(spec, x, y)
        b = inner_integral(spec, x, y, sign=-1)
        assert abs(b - np.conj(a)) <= 1e-14


def test_lp_norm_constant_and_zero():
    g = Grid((0, 1), (0, 1), 11, 11)
    assert lp_norm(GridField(g, np.ones((11, 11))), 4) == pytest.approx(1.0, abs=1e-15)
    assert lp_norm(GridField(g, np.zeros((11, 11))), 4) == 0.0


def test_lp_norm_against_fsum(rng):
    g = Grid((-1, 1), (-0.5, 0.5), 41, 23)
    vals = rng.standard_normal((41, 23)) + 1j * rng.standard_normal((41, 23))
    fld = GridField(g, vals)
    for p in (1, 2, 3.5, 4):
        terms = []
        for i in range(41):
            for j in range(23):
                w = g.dx * g.dy * (0.5 if i in (0, 40) else 1) * (0.5 if j in (0, 22) else 1)
                terms.append(w * abs(vals[i, j]) ** p)
        assert lp_norm(fld, p) == pytest.approx(math.fsum(terms) ** (1 / p), rel=1e-10)


def test_lp_norm_subdomain_and_empty():
    g = Grid((0, 1), (0, 1), 11, 11)
    fld = GridField(g, np.ones((11, 11)))
    assert lp_norm(fld, 2, ((0, 0.5), (0, 1))) == pytest.approx(math.sqrt(0.5))
    with pytest.raises(EmptyDomain):
        lp_norm(fld, 4, ((0.2, 0.2), (0, 1)))


def test_gridfield_shape_check():
    with pytest.raises(GridMismatch):
        GridField(Grid((0, 1), (0, 1), 3, 3), np.zeros((3, 4)))


def test_norms_1d():
    chi = Characteristic(0.0, 1.0)
    assert l2_norm_1d(chi) == pytest.approx(1.0, abs=1e-12)
    assert l4_norm_1d(chi) == pytest.approx(1.0, abs=1e-12)
    assert l4_norm_1d(Zero()) == 0.0
    half = Restricted(chi, 0.0, 0.5)
    assert l4_norm_1d(half) == pytest.approx(0.5**0.25, abs=1e-12)


@pytest.mark.parametrize("c,w", [(0.5, 0.1), (0.3, 0.25), (0.5, 0.0625)])
def test_gaussian_norms_closed_form(c, w):
    f = GaussBump(c, w)
    # int_0^1 exp(-p (t-c)^2 / (2 w^2)) dt
    def exact(p):
        s = w / math.sqrt(p)
        return s * math.sqrt(math.pi / 2) * (erf((1 - c) / (s * math.sqrt(2))) + erf(c / (s * math.sqrt(2))))
    assert l2_norm_1d(f) == pytest.approx(exact(2) ** 0.5, abs=1e-6)
    assert l4_norm_1d(f) == pytest.approx(exact(4) ** 0.25, abs=1e-6)


@pytest.mark.parametrize("lam", [64.0, 256.0, 512.0])
@pytest.mark.parametrize("f", [Characteristic(0.0, 1.0), TrigPoly(seed=0), GaussBump(0.5, 0.125)],
                         ids=["chi", "trig", "gauss"])
def test_grid_refinement(lam, f, bump):
    spec = OperatorSpec(lam, cutoff=bump, f=f)
    a = lp_norm(evaluate_field(spec, square_grid(257)), 4)
    b = lp_norm(evaluate_field(spec, square_grid(513)), 4)
    assert abs(a - b) <= 0.01 * b


def test_default_grid_spacing():
    g = default_grid(64)
    assert g.nx == 513 and g.dx <= 1 / 256
    assert default_grid(4).dx <= 1 / 32
    assert default_grid(4096).nx == 1025


def test_csv_round_trip(tmp_path, spec256):
    fld = evaluate_field(spec256, Grid((-1, 1), (-0.5, 0.5), 7, 5))
    p = tmp_path / "field.csv"
    fld.to_csv(p)
    assert p.read_text().splitlines()[0] == "x,y,re,im"
    back = GridField.from_csv(p)
    assert np.array_equal(back.values, fld.values)
    assert np.array_equal(back.grid.x, fld.grid.x)


def test_invalid_specs():
    with pytest.raises(ValueError):
        OperatorSpec(0.0, f=Characteristic())
    with pytest.raises(ValueError):
        Grid((0, 1), (0, 1), 1, 5)
