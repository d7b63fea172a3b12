import math

import mpmath
import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from galois_equidist.mollifier import (
    SpherePoint,
    circle_average,
    estimate_lipschitz,
    f_delta,
    f_delta_chart,
    lipschitz_bound,
    objective,
    optimize_delta,
    rho,
    rho_prime,
    rho_prime_bound,
    sphere_distance_points,
    sphere_distances,
    u_delta,
    v_delta,
)

DELTAS = [0.1, 0.3, 0.5, 0.6, 0.9, 0.99]


def mp_sphere(p, q):
    """Oracle: 50-digit arccos form of the spherical distance."""
    with mpmath.workdps(50):
        z0, z1, w0, w1 = (mpmath.mpc(v) for v in (p[0], p[1], q[0], q[1]))
        inner = abs(z0 * mpmath.conj(w0) + z1 * mpmath.conj(w1))
        norms = mpmath.sqrt(abs(z0) ** 2 + abs(z1) ** 2) * mpmath.sqrt(abs(w0) ** 2 + abs(w1) ** 2)
        c = min(inner / norms, mpmath.mpf(1))
        return float(2 * mpmath.acos(c)), float(2 * abs(z0 * w1 - z1 * w0) / norms)


@pytest.mark.parametrize("delta", DELTAS)
def test_rho_is_c1_at_the_knots(delta):
    eps = 1e-9
    for knot, value in [(delta / 2, 0.0), (delta, 1.0), (1 / delta, 1.0), (2 / delta, 0.0)]:
        for r in (knot - eps, knot, knot + eps):
            assert rho(delta, r) == pytest.approx(value, abs=1e-7)
            assert rho_prime(delta, r) == pytest.approx(0.0, abs=1e-6 / delta**3)


@pytest.mark.parametrize("delta", DELTAS)
def test_rho_prime_matches_finite_differences_and_bound(delta):
    r = np.linspace(0, 2.5 / delta, 20001)
    values, slopes = rho(delta, r), rho_prime(delta, r)
    assert np.all((values >= 0) & (values <= 1 + 1e-15))
    # the bound is attained exactly (at 3 delta / 4), so allow rounding
    assert np.max(np.abs(slopes)) <= rho_prime_bound(delta) * (1 + 1e-14)
    h = 1e-7
    fd = (rho(delta, r + h) - rho(delta, np.maximum(r - h, 0))) / (r + h - np.maximum(r - h, 0))
    assert np.max(np.abs(fd - slopes)) < 1e-4 / delta**2


def test_rho_input_validation():
    with pytest.raises(ValueError):
        rho(0.5, -1.0)
    for bad in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(ValueError):
            rho(bad, 1.0)


def test_lipschitz_bound_by_hand():
    # 2 sqrt 2 (d^2 + 9) / d^3 evaluated independently in mpmath
    for d in (0.9071, 0.9, 0.5):
        with mpmath.workdps(30):
            want = float(2 * mpmath.sqrt(2) * (mpmath.mpf(d) ** 2 + 9) / mpmath.mpf(d) ** 3)
        assert lipschitz_bound(d) == pytest.approx(want, rel=1e-14)
    assert lipschitz_bound(0.9071) == pytest.approx(37.22340852806467, rel=1e-13)
    assert objective(0.5) == pytest.approx(421.4926045442141, rel=1e-13)


def test_optimize_delta_against_bounded_minimizer():
    opt = optimize_delta()
    oracle = minimize_scalar(objective, bounds=(0.5, 0.99), method="bounded", options={"xatol": 1e-12})
    assert opt.delta == pytest.approx(oracle.x, abs=1e-6)
    assert opt.value == pytest.approx(oracle.fun, rel=1e-10)
    assert opt.delta == pytest.approx(0.907190182605075, abs=1e-6)
    assert opt.value_over_2pi == pytest.approx(15.1132, abs=5e-5)
    assert set(opt.to_json()) == {"delta", "value", "value_over_2pi"}


def test_f_delta_values():
    d = 0.5
    assert f_delta(d, SpherePoint.infinity()) == 0
    assert f_delta(d, SpherePoint(1, 0)) == 0
    assert f_delta(d, SpherePoint.chart(1j)) == pytest.approx(1j)
    assert f_delta(d, SpherePoint(2.0, 2.0)) == pytest.approx(1.0)  # (2 : 2) = (1 : 1)
    z = np.array([0.1, 0.3 + 0.3j, 1.5, 10.0])
    out = f_delta_chart(d, z)
    assert np.allclose(u_delta(d, z) + 1j * v_delta(d, z), out)
    assert out[0] == 0 and out[3] == 0


def test_sphere_point_normalization():
    p = SpherePoint(3.0, 4.0j)
    assert max(abs(p.z0), abs(p.z1)) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        SpherePoint(0, 0)


def test_distances_against_oracle():
    rng = np.random.default_rng(5)
    for _ in range(300):
        p = rng.normal(size=2) + 1j * rng.normal(size=2)
        scale = 10.0 ** rng.uniform(-10, 0)
        q = p + scale * (rng.normal(size=2) + 1j * rng.normal(size=2))
        s, c = sphere_distances(p[0], p[1], q[0], q[1])
        ws, wc = mp_sphere(p, q)
        assert abs(float(s) - ws) <= 1e-12 and abs(float(c) - wc) <= 1e-12
        assert c <= s + 1e-15 <= math.pi / 2 * c + 2e-15


def test_distance_special_points():
    s, c = sphere_distance_points(SpherePoint.chart(0), SpherePoint.infinity())
    assert s == pytest.approx(math.pi) and c == pytest.approx(2.0)
    s, c = sphere_distance_points(SpherePoint.chart(1), SpherePoint.chart(-1))
    assert s == pytest.approx(math.pi)
    s, _ = sphere_distance_points(SpherePoint.chart(2), SpherePoint(3.0, 6.0))
    assert s == 0


@pytest.mark.parametrize("delta", [0.3, 0.6, 0.9])
@pytest.mark.parametrize("component", ["u", "v"])
def test_empirical_lipschitz_below_bound(delta, component):
    est = estimate_lipschitz(component, delta, samples=20_000, seed=1)
    assert 0 < est <= lipschitz_bound(delta)


def test_estimate_lipschitz_validation():
    with pytest.raises(ValueError):
        estimate_lipschitz("w", 0.5)


def test_circle_average():
    assert circle_average(lambda z: z**3) == pytest.approx(0, abs=1e-14)
    assert circle_average(lambda z: np.abs(z)) == pytest.approx(1)
