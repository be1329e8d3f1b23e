import numpy as np
import pytest

from oscint import (
    Characteristic, Chirp, GaussBump, InvalidProfile, Rescaled, Restricted, Sampled,
    SmoothBump, TrigPoly, eval_test, load_test_function, make_cutoff,
    modulated_rescaled_cutoff,
)
from oscint.amplitude import bump, transition


def test_bump_values(bump):
    assert bump(0.0, 0.0, 0.0) == 1.0
    assert bump(0.0, 0.0, 1.01) == 0.0
    assert bump(0.3, -0.5, 0.49) == 1.0


def test_invalid_profile():
    with pytest.raises(InvalidProfile):
        make_cutoff("smooth_bump", inner=1.0, outer=0.5)
    with pytest.raises(InvalidProfile):
        make_cutoff("nope")


def test_support_containment(bump, rng):
    # 30^3 points with sup-norm >= 1
    pts = rng.uniform(-3, 3, size=(30**3, 3))
    side = rng.integers(0, 3, size=len(pts))
    pts[np.arange(len(pts)), side] = np.sign(pts[np.arange(len(pts)), side]) * rng.uniform(1, 3, len(pts))
    assert np.all(bump(pts[:, 0], pts[:, 1], pts[:, 2]) == 0.0)


def test_plateau_on_half_cube(bump, rng):
    pts = rng.uniform(-0.5, 0.5, size=(2000, 3))
    assert np.all(bump(pts[:, 0], pts[:, 1], pts[:, 2]) == 1.0)


@pytest.mark.parametrize("order", [1, 2, 3])
def test_transition_derivatives_match_finite_differences(order):
    u = np.linspace(0.02, 0.98, 400)
    h = 1e-4
    lower = transition(u, order - 1)
    fd = (transition(u + h, order - 1) - transition(u - h, order - 1)) / (2 * h)
    np.testing.assert_allclose(transition(u, order), fd, atol=1e-5 * 10**order)
    assert lower.shape == u.shape


def test_derivative_bound_against_finite_difference(bump):
    t = np.linspace(-1, 1, 400_001)
    vals = bump._b(t)
    fd = np.max(np.abs(np.diff(vals) / np.diff(t)))
    assert abs(bump.derivative_bound[1] - fd) <= 0.01 * fd


def test_class_audit_records_constant(bump):
    # psi = 1 on the half cube forces sup |d_t psi| > 1; recorded, not asserted <= 1
    b = bump.derivative_bound
    assert b[1] > 1
    assert all(np.isfinite(b[j]) for j in (1, 2, 3))
    # derivative of a unit step over width 1/2 must exceed the mean slope 2
    assert b[1] >= 2


def test_modulated_j0_is_plain_rescale(bump, rng):
    psi0 = modulated_rescaled_cutoff(bump, 0, 8, 256.0)
    x, y, s = rng.uniform(-1, 1, size=(3, 100))
    np.testing.assert_array_equal(psi0(x, y, s), bump(x, y, s / 8))


def test_modulated_unit_modulus(bump, rng):
    psi = modulated_rescaled_cutoff(bump, 3, 8, 256.0)
    x, y, s = rng.uniform(-1, 1, size=(3, 100))
    np.testing.assert_allclose(np.abs(psi(x, y, s)), bump(x, y, (s + 3) / 8), rtol=1e-14)


def test_modulated_factorization_matches_definition(bump, rng):
    psi = modulated_rescaled_cutoff(bump, 5, 8, 64.0, y_scale=8)
    x, y, s = rng.uniform(-1, 1, size=(3, 200))
    y = y / 8
    fact = psi.x_factor(x) * psi.y_factor(y) * psi.t_factor(s) * np.exp(1j * psi.t_modulation(y) * s)
    np.testing.assert_allclose(fact, psi(x, y, s), atol=1e-15)


def test_modulated_derivative_bound_by_sampling(bump):
    lam, K = 64.0, 8
    for j in range(K):
        psi = modulated_rescaled_cutoff(bump, j, K, lam)
        s = np.linspace(-1, 1, 200_001)
        ys = np.linspace(-1, 1, 21)
        vals = psi(0.0, ys[:, None], s[None, :])
        fd = np.max(np.abs(np.diff(vals, axis=1) / np.diff(s)))
        measured = psi.derivative_bound[1]
        assert abs(measured - fd) <= 0.01 * max(fd, 1e-12)
        # O(1): modulation 2 lam j / K^2 plus the rescaled bump slope
        assert measured <= 2 * lam * j / K**2 + bump.derivative_bound[1] / K + 1e-9


def test_characteristic():
    f = Characteristic(0.0, 1.0)
    assert eval_test(f, 0.5) == 1
    assert eval_test(f, -0.5) == 0


def test_chirp_unit_modulus():
    f = Chirp(40.0)
    t = np.linspace(0, 1, 101)
    np.testing.assert_allclose(np.abs(f(t)), 1.0, rtol=1e-15)
    np.testing.assert_allclose(f(t), np.exp(40j * t * t))


@pytest.mark.parametrize("f", [
    Characteristic(0.2, 0.6), GaussBump(0.5, 0.1), Chirp(10.0), TrigPoly(seed=3),
    Sampled(np.linspace(1, 2, 9), (0.1, 0.9)),
])
def test_zero_outside_support(f):
    a, b = f.support
    t = np.concatenate([np.linspace(a - 1, a - 1e-9, 50), np.linspace(b + 1e-9, b + 1, 50)])
    assert np.all(f(t) == 0)


def test_restricted_half_open():
    f = Restricted(Characteristic(0.0, 1.0), 0.25, 0.5)
    assert f(0.25) == 1 and f(0.5) == 0 and f(0.4999) == 1


def test_rescaled_matches_cap():
    base = TrigPoly(seed=1)
    g = Rescaled(base, 3, 8)
    s = np.linspace(0, 0.999, 50)
    np.testing.assert_array_equal(g(s), base((s + 3) / 8))
    assert g(1.0) == 0 and g(-0.1) == 0


def test_sampled_linear_interpolation():
    f = Sampled([0.0, 1.0, 0.0], (0.0, 1.0))
    assert f(0.25) == 0.5
    assert f.breakpoints() == [0.5]


def test_load_test_function(tmp_path):
    p = tmp_path / "f.txt"
    t = np.linspace(0, 1, 11)
    np.savetxt(p, np.column_stack([t, t**2]))
    f = load_test_function(p)
    assert abs(f(0.5) - 0.25) < 1e-15
    bad = tmp_path / "bad.txt"
    np.savetxt(bad, np.column_stack([t**2, t]))
    with pytest.raises(ValueError):
        load_test_function(bad)
