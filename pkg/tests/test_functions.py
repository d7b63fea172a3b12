import numpy as np
import pytest
from scipy.integrate import quad

from galois_equidist.functions import (
    NotApplicable,
    RadialBump,
    VonMisesBump,
    empirical_lipschitz,
    function_from_dict,
    load_function,
)
from galois_equidist.harmonic import fourier_coeffs, grid_samples
from galois_equidist.orbits import SpecError

from conftest import FUNCTION_FILES


def instances():
    for path in FUNCTION_FILES:
        for dim in (1, 2, 3):
            try:
                yield pytest.param(load_function(path, dim), id=f"{path.stem}-{dim}")
            except NotApplicable:
                continue


@pytest.mark.parametrize("F", list(instances()))
def test_declared_lipschitz_dominates_empirical(F):
    assert empirical_lipschitz(F, pairs=10_000, seed=11) <= F.lip_constant


@pytest.mark.parametrize("kappa", [0.5, 1.0, 3.0, 8.0])
def test_vonmises_coefficients_match_fft(kappa):
    F = VonMisesBump(1, kappa, (0,))
    grid = fourier_coeffs(grid_samples(F, 512, 1), box=40)
    assert np.max(np.abs(grid.coeffs - F.spectrum(40).coeffs)) < 1e-14


@pytest.mark.parametrize("kappa", [0.5, 2.0])
def test_vonmises_coefficient_by_quadrature(kappa):
    F = VonMisesBump(1, kappa, (0,))
    t = F.spectrum(5)
    for n in range(4):
        val, _ = quad(lambda th: float(F(np.array([[th]]))[0]) * np.cos(2 * np.pi * n * th), 0, 1, epsabs=1e-14)
        assert t.entry((n,)).real == pytest.approx(val, abs=1e-12)


def test_vonmises_tail_is_small_and_sums_to_one():
    t = VonMisesBump(2, 3.0, (0, 1)).spectrum(32)
    # F0(0) = 1 = sum of all coefficients (all are positive)
    assert float(np.abs(t.coeffs).sum()) + t.tail == pytest.approx(1.0, abs=1e-13)
    assert t.tail < 1e-20


def test_radial_bump_shape_and_slope():
    psi = RadialBump(2.0)
    assert psi(0.0) == pytest.approx(1.0)
    assert psi(2.0) == 0.0 and psi(5.0) == 0.0
    r = np.linspace(0, 2, 200001)
    slopes = np.abs(np.diff(psi(r))) / np.diff(r)
    assert slopes.max() <= psi.lip()
    assert slopes.max() == pytest.approx(psi.lip(), rel=1e-6)


def test_constant_function_has_zero_lipschitz():
    F = function_from_dict({"torus": {"type": "constant", "value": 2.0}}, 2)
    assert F.lip_constant == 0.0
    assert F.spectrum(4).entry((0, 0)) == 2.0


def test_cos_sum_averages_coordinates():
    F = function_from_dict({"torus": {"type": "cos_sum"}}, 3)
    th = np.array([[0.0, 0.25, 0.5]])
    assert F.F0(th)[0] == pytest.approx((1 + 0 - 1) / 3, abs=1e-15)


def test_random_trig_is_deterministic():
    d = {"torus": {"type": "random_trig", "seed": 9}}
    a, b = function_from_dict(d, 2), function_from_dict(d, 2)
    assert np.array_equal(a.spectrum(4).coeffs, b.spectrum(4).coeffs)
    assert a.spec_digest == b.spec_digest


def test_dimension_limits():
    with pytest.raises(NotApplicable):
        function_from_dict({"min_dim": 2}, 1)
    with pytest.raises(NotApplicable):
        function_from_dict({"max_dim": 1}, 2)
    with pytest.raises(NotApplicable):
        function_from_dict({"torus": {"type": "trig", "terms": [{"n": [0, 1], "cos": 1}]}}, 1)


def test_sampled_function_requires_lip_and_is_flagged():
    samples = np.cos(2 * np.pi * np.arange(32) / 32).tolist()
    with pytest.raises(SpecError):
        function_from_dict({"kind": "sampled", "samples": samples}, 1)
    F = function_from_dict({"kind": "sampled", "samples": samples, "lip": 5.0}, 1)
    assert not F.smoothness_verified and F.kind == "sampled"
    t = F.spectrum(32)
    assert t.radius == 15
    assert t.entry((1,)) == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("data", [
    {"torus": {"type": "nope"}},
    {"torus": {"type": "trig"}},
    {"torus": {"type": "vonmises", "kappa": "x"}},
    {"radial": {}},
])
def test_malformed_function_specs(data):
    with pytest.raises(SpecError):
        function_from_dict(data, 1)
