import math

import numpy as np
import pytest

from galois_equidist.discrepancy import cyclotomic_point, primes_between
from galois_equidist.functions import TrigPolynomial, VonMisesBump, function_from_dict
from galois_equidist.harmonic import (
    GridError,
    c_of_F,
    derivative_l1_sum,
    derivative_spectrum,
    fourier_coeffs,
    fourier_stieltjes,
    fourier_stieltjes_at,
    grid_samples,
    haar_integral,
    pair_spectra,
    plancherel_gap,
    transform_l1,
    trig_eval,
)
from galois_equidist.orbits import enumerate_orbit, point_from_dict

COS_FIRST = {"torus": {"type": "trig", "terms": [{"n": [1], "cos": 1.0}]}, "radial": {"radius": 2.0}}


def test_cosine_coefficients_by_hand():
    samples = grid_samples(lambda th: np.cos(2 * np.pi * th[:, 0]), 16, 1)
    t = fourier_coeffs(samples, box=4)
    assert t.entry((1,)) == pytest.approx(0.5, abs=1e-15)
    assert t.entry((-1,)) == pytest.approx(0.5, abs=1e-15)
    assert t.entry((0,)) == pytest.approx(0.0, abs=1e-15)
    assert transform_l1(t) == (pytest.approx(1.0, abs=1e-14), pytest.approx(0.0, abs=1e-14))


def test_two_dimensional_mixed_mode():
    f = lambda th: np.sin(2 * np.pi * (2 * th[:, 0] - th[:, 1]))  # noqa: E731
    t = fourier_coeffs(grid_samples(f, 16, 2), box=3)
    assert t.entry((2, -1)) == pytest.approx(-0.5j, abs=1e-15)
    assert t.entry((-2, 1)) == pytest.approx(0.5j, abs=1e-15)
    assert np.sum(np.abs(t.coeffs)) == pytest.approx(1.0, abs=1e-14)


def test_grid_validation():
    with pytest.raises(GridError):
        fourier_coeffs(np.zeros(12))
    with pytest.raises(GridError):
        fourier_coeffs(np.zeros(16), box=8)
    with pytest.raises(GridError):
        fourier_coeffs(np.zeros((16, 8)))


def test_derivative_and_c_of_F_for_cosine():
    F = function_from_dict(COS_FIRST, 1)
    t = F.spectrum(8)
    d = derivative_spectrum(t, 0)
    assert d.entry((1,)) == pytest.approx(1j * math.pi, abs=1e-14)
    assert derivative_l1_sum(t) == pytest.approx(2 * math.pi, abs=1e-14)
    assert c_of_F(F, t) == pytest.approx(2 * F.lip_constant + 32 * math.pi, abs=1e-12)


def test_haar_integral_is_zero_mode():
    F = VonMisesBump(1, 2.0, (0,))
    t = F.spectrum(32)
    # integral of exp(k(cos - 1)) over the circle is I_0(k) e^-k
    nodes = np.arange(4096) / 4096
    assert haar_integral(t) == pytest.approx(float(np.mean(F(nodes[:, None]))), abs=1e-14)


def test_derivative_matches_finite_differences():
    F = VonMisesBump(2, 1.5, (0, 1))
    t = F.spectrum(32)
    rng = np.random.default_rng(3)
    th = rng.random((50, 2))
    h = 1e-6
    for l in range(2):
        e = np.zeros(2)
        e[l] = h
        fd = (F(th + e) - F(th - e)) / (2 * h)
        assert np.max(np.abs(trig_eval(derivative_spectrum(t, l), th) - fd)) < 1e-7


def test_grid_transform_matches_exact_vonmises():
    F = VonMisesBump(1, 3.0, (0,))
    grid = fourier_coeffs(grid_samples(F, 256, 1), box=32)
    exact = F.spectrum(32)
    assert np.max(np.abs(grid.coeffs - exact.coeffs)) < 1e-14
    assert grid.tail < 1e-12


def test_plancherel():
    F = function_from_dict({"torus": {"type": "random_trig", "seed": 4, "max_mode": 3, "count": 6}}, 2)
    samples = grid_samples(F.F0, 32, 2)
    assert plancherel_gap(samples, fourier_coeffs(samples)) < 1e-13


def test_restrict_moves_mass_to_tail():
    t = VonMisesBump(1, 1.0, (0,)).spectrum(16)
    small = t.restrict(2)
    total, tail = transform_l1(t)
    s, st_ = transform_l1(small)
    assert s + st_ == pytest.approx(total + tail, abs=1e-14)
    assert small.radius == 2


def test_nu_hat_roots_of_unity():
    zeta3 = enumerate_orbit(point_from_dict({"primitive_min_poly": [1, 1, 1]}))
    assert fourier_stieltjes_at(zeta3, (1,)) == pytest.approx(-0.5, abs=1e-14)
    assert fourier_stieltjes_at(zeta3, (3,)) == pytest.approx(1.0, abs=1e-14)
    for p in primes_between(3, 23):
        orbit = enumerate_orbit(cyclotomic_point(p))
        assert fourier_stieltjes_at(orbit, (1, 0)) == pytest.approx(-1 / (p - 1), abs=1e-13)


def test_dense_box_matches_pointwise(orbit_of):
    _, orbit = orbit_of("zeta5_cbrt2")
    spec = fourier_stieltjes(orbit, box=4)
    for n in [(0, 0), (1, 0), (0, 3), (2, -1), (-4, 4)]:
        assert spec.at(n) == pytest.approx(fourier_stieltjes_at(orbit, n), abs=1e-13)


def test_pairing_reproduces_orbit_average(orbit_of):
    _, orbit = orbit_of("zeta5_cbrt2")
    F = function_from_dict({"torus": {"type": "random_trig", "seed": 2, "max_mode": 4, "count": 8}}, 2)
    t = F.spectrum(8)
    paired, tail = pair_spectra(t, fourier_stieltjes(orbit, 8))
    direct = float(np.mean(F.F0(orbit.angles)))
    assert tail == 0
    assert haar_integral(t) + paired.real == pytest.approx(direct, abs=1e-12)


def test_exact_trig_spectrum_has_zero_tail():
    T = TrigPolynomial(2, {(1, 0): 0.5, (-1, 0): 0.5, (0, 2): 0.25j, (0, -2): -0.25j})
    t = T.spectrum(4)
    assert t.tail == 0 and t.exact
    th = np.random.default_rng(0).random((20, 2))
    assert np.allclose(trig_eval(t, th), T(th), atol=1e-14)
