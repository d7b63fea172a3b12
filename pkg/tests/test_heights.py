import math

import numpy as np
import pytest
import sympy as sp

from galois_equidist.heights import (
    HeightUnavailable,
    NearCircleWarning,
    check_log_sum,
    check_tail_count,
    coordinate_height,
    integral_orbit_height,
    mahler_measure_quadrature,
    mahler_measure_roots,
    point_height,
    set_height,
)
from galois_equidist.orbits import one_dimensional_orbit, point_from_dict, power_orbit
from galois_equidist.polynomial import IntPolynomial, cyclotomic
from galois_equidist.roots import find_roots

LEHMER = IntPolynomial([1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
x = sp.symbols("x")


def eig_mahler(p: IntPolynomial) -> float:
    """Oracle: Mahler measure from companion-matrix eigenvalues."""
    c = np.array(p.coeffs, dtype=float)
    d = p.degree
    C = np.zeros((d, d))
    C[1:, :-1] = np.eye(d - 1)
    C[:, -1] = -c[:-1] / c[-1]
    r = np.linalg.eigvals(C)
    return math.log(abs(p.leading)) + float(np.sum(np.log(np.maximum(1, np.abs(r)))))


@pytest.mark.parametrize(
    "name, expected",
    [
        ("two", math.log(2)),
        ("half", math.log(2)),
        ("sqrt2", math.log(2) / 2),
        ("golden", math.log((1 + 5**0.5) / 2) / 2),
        ("zeta5", 0.0),
        ("one_plus_i", math.log(2) / 2),
        ("cbrt2", math.log(2) / 3),
        ("sqrt2_sqrt3", math.log(2) / 2 + math.log(3) / 2),
        ("seven", math.log(7)),
    ],
)
def test_closed_form_heights(orbit_of, name, expected):
    spec, orbit = orbit_of(name)
    assert point_height(spec, orbit).total_h == pytest.approx(expected, abs=1e-12)


def test_lehmer_mahler_measure():
    m = mahler_measure_roots(LEHMER)
    assert m == pytest.approx(0.1623576120077367, abs=1e-13)
    assert m == pytest.approx(eig_mahler(LEHMER), abs=1e-10)
    assert coordinate_height(LEHMER) == (pytest.approx(m / 10, abs=1e-14), 10)


def test_lehmer_tail_count():
    rs = find_roots(LEHMER)
    tc = check_tail_count(rs, 0.9, mahler_measure_roots(LEHMER))
    assert tc.count == 2
    assert tc.bound == pytest.approx(3.0819441418646187, rel=1e-12)
    assert tc.ok


def test_quadrature_agrees_off_the_circle():
    for coeffs in ([-2, 0, 1], [-1, 2], [1, -3, 0, 1], [6, 0, 0, -5, 2]):
        p = IntPolynomial(coeffs)
        assert mahler_measure_quadrature(p) == pytest.approx(mahler_measure_roots(p), abs=1e-10)


def test_quadrature_warns_near_circle():
    with pytest.warns(NearCircleWarning):
        mahler_measure_quadrature(LEHMER)


def test_multiplicity_counted():
    p = IntPolynomial([4, -4, 1])  # (x - 2)^2
    assert mahler_measure_roots(p) == pytest.approx(2 * math.log(2), abs=1e-14)
    assert mahler_measure_roots(IntPolynomial([0, -2, 1])) == pytest.approx(math.log(2))


@pytest.mark.parametrize("m", [1, 2, 3, 5, 12, 30, 49])
def test_kronecker_roots_of_unity(m):
    assert mahler_measure_roots(cyclotomic(m)) == pytest.approx(0.0, abs=1e-12)


def test_exact_minimal_polynomial_route_matches_sympy():
    # sqrt 3 = (11 gamma - gamma^3)/2 with gamma = sqrt 2 + sqrt 3; oracle minpoly from sympy
    spec = point_from_dict({"primitive_min_poly": [1, 0, -10, 0, 1],
                            "coords": [{"num": [0, 11, 0, -1], "den": 2}]})
    rep = point_height(spec)
    want = sp.Poly(sp.minimal_polynomial(sp.sqrt(3), x), x)
    assert rep.per_coordinate[0].min_poly_source == "exact-resultant"
    assert rep.total_h == pytest.approx(eig_mahler(IntPolynomial(want.all_coeffs()[::-1])) / 2, abs=1e-12)


def test_power_rule_on_orbit(orbit_of):
    _, orbit = orbit_of("cbrt2")
    h = integral_orbit_height(orbit.points[:, 0])
    for k in (2, 3, 5):
        hk = integral_orbit_height(power_orbit(orbit, (k,)).points[:, 0])
        assert hk == pytest.approx(k * h, abs=1e-12)


def test_log_sum_and_set_height(orbit_of):
    spec, orbit = orbit_of("lehmer_pair")
    rep = point_height(spec, orbit)
    assert check_log_sum(orbit, rep.total_h).ok
    sub = one_dimensional_orbit(orbit, 0)
    assert set_height([(sub, rep.per_coordinate[0].h)]) == pytest.approx(mahler_measure_roots(LEHMER))


def test_quadrature_method_and_both():
    spec = point_from_dict({"primitive_min_poly": [-2, 0, 1]})
    q = point_height(spec, method="quadrature")
    assert q.per_coordinate[0].method == "quadrature"
    assert q.total_h == pytest.approx(math.log(2) / 2, abs=1e-10)
    b = point_height(spec, method="both")
    assert any("quadrature" in n for n in b.notes)
    with pytest.raises(ValueError):
        point_height(spec, method="other")


def test_height_unavailable_for_large_nonintegral():
    spec = point_from_dict({"primitive_min_poly": [-2] + [0] * 12 + [1], "coords": [{"num": [0, 1], "den": 2}]})
    with pytest.raises(HeightUnavailable):
        point_height(spec)


def test_integral_fast_path():
    spec = point_from_dict({"primitive_min_poly": [-2] + [0] * 12 + [1], "coords": [[0, 1]], "integral": [True]})
    rep = point_height(spec)
    assert rep.per_coordinate[0].method == "orbit-integer"
    assert rep.total_h == pytest.approx(math.log(2) / 13, abs=1e-12)


def test_product_assertion_in_notes(orbit_of):
    spec, orbit = orbit_of("product_zeta5_sqrt2")
    rep = point_height(spec, orbit)
    assert spec.assertion in rep.notes
    assert rep.total_h == pytest.approx(math.log(2) / 2, abs=1e-12)
