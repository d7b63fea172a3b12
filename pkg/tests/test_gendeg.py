import csv
import itertools

import pytest

from galois_equidist.discrepancy import cyclotomic_point, primes_between
from galois_equidist.gendeg import (
    coordinate_degrees,
    degree_search_table,
    generalized_degree,
    is_canonical,
    shell,
    write_table_csv,
)
from galois_equidist.orbits import enumerate_orbit


def brute_gendeg(orbit):
    """Oracle: full table up to the coordinate-degree bound, no early exit."""
    R = min(coordinate_degrees(orbit))
    table = degree_search_table(orbit, R)
    best = min(sum(map(abs, n)) * d for n, d in table.items())
    witnesses = sorted(n for n, d in table.items() if sum(map(abs, n)) * d == best and is_canonical(n))
    return best, witnesses[0]


@pytest.mark.parametrize("dim, radius", [(1, 3), (2, 4), (3, 3), (4, 2)])
def test_shell_matches_itertools(dim, radius):
    brute = sorted(n for n in itertools.product(range(-radius, radius + 1), repeat=dim)
                   if sum(map(abs, n)) == radius)
    assert list(shell(dim, radius)) == brute


@pytest.mark.parametrize(
    "name, value, witness",
    [
        ("zeta5_cbrt2", 3, (0, 1)),
        ("zeta5_cbrt2_sum", 3, (0, 1)),
        ("sqrt2_diag", 2, (0, 1)),
        ("zeta5_inverse", 2, (1, 1)),
        ("zeta7_cube", 3, (1, 2)),
        ("lehmer_pair", 3, (2, -1)),
        ("sqrt2_sqrt3", 2, (0, 1)),
        ("lehmer", 10, (1,)),
    ],
)
def test_known_values(orbit_of, name, value, witness):
    _, orbit = orbit_of(name)
    rep = generalized_degree(orbit)
    assert (rep.value, rep.witness) == (value, witness)
    assert (rep.value, rep.witness) == brute_gendeg(orbit)


@pytest.mark.parametrize("name", ["zeta3", "zeta12", "cbrt2", "half", "salem4"])
def test_one_dimensional_equals_degree(orbit_of, name):
    _, orbit = orbit_of(name)
    assert generalized_degree(orbit).value == orbit.D


def test_cyclotomic_family_nondecreasing():
    values = [generalized_degree(enumerate_orbit(cyclotomic_point(p))).value for p in primes_between(3, 31)]
    assert values == sorted(values)
    assert values[0] == 2 and set(values[1:]) == {3}


def test_divisibility_and_symmetry(orbit_of):
    _, orbit = orbit_of("zeta5_cbrt2")
    table = degree_search_table(orbit, 4)
    for n, d in table.items():
        assert orbit.D % d == 0
        assert table[tuple(-v for v in n)] == d


def test_search_radius_argument(orbit_of):
    _, orbit = orbit_of("zeta5_cbrt2")
    with pytest.raises(ValueError):
        generalized_degree(orbit, radius=0)
    rep = generalized_degree(orbit, radius=1)
    assert rep.search_radius == 1 and rep.value == 3


def test_table_csv(tmp_path, orbit_of):
    _, orbit = orbit_of("sqrt2_sqrt3")
    table = degree_search_table(orbit, 2)
    out = tmp_path / "t.csv"
    write_table_csv(table, out)
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == len(table) == 12
    first = rows[0]
    n = tuple(int(v) for v in first["n"].split())
    assert int(first["deg"]) == table[n]
    assert int(first["product"]) == sum(map(abs, n)) * table[n]
