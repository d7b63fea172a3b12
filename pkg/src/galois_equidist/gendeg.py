"""Generalized degree: min over n != 0 of ||n||_1 * deg(chi^n(xi))."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

from .orbits import ClusterError, GaloisOrbit, monomial_image

MAX_LATTICE_POINTS = 10**6


class SearchLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class GenDegReport:
    value: int
    witness: tuple[int, ...]
    search_radius: int
    examined: int

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "witness": list(self.witness),
            "search_radius": self.search_radius,
            "examined": self.examined,
        }


def shell(dim: int, radius: int) -> Iterator[tuple[int, ...]]:
    """All integer vectors of 1-norm exactly ``radius``, in increasing lexicographic order."""
    if dim == 1:
        if radius == 0:
            yield (0,)
        else:
            yield (-radius,)
            yield (radius,)
        return
    for first in range(-radius, radius + 1):
        for rest in shell(dim - 1, radius - abs(first)):
            yield (first,) + rest


def is_canonical(n: Sequence[int]) -> bool:
    """First nonzero entry positive; chi^n and chi^-n have conjugate values."""
    for v in n:
        if v:
            return v > 0
    return False


def coordinate_degrees(orbit: GaloisOrbit) -> list[int]:
    out = []
    for l in range(orbit.dim):
        e = [0] * orbit.dim
        e[l] = 1
        out.append(monomial_image(orbit, e).deg)
    return out


def _degree(orbit: GaloisOrbit, n: tuple[int, ...]) -> int:
    try:
        return monomial_image(orbit, n).deg
    except ClusterError as exc:
        if exc.n is None:
            exc.n = n
        raise


def generalized_degree(
    orbit: GaloisOrbit,
    coord_degrees: Sequence[int] | None = None,
    radius: int | None = None,
    max_points: int = MAX_LATTICE_POINTS,
) -> GenDegReport:
    """Exact minimum by shells of increasing 1-norm.

    Shell s contributes values >= s, so the search stops once the running
    minimum is below the next shell radius.  Minimizers are ranked
    lexicographically among vectors whose first nonzero entry is positive.
    """
    if coord_degrees is None:
        coord_degrees = coordinate_degrees(orbit)
    bound = min(coord_degrees)
    R = bound if radius is None else min(radius, bound)
    if R < 1:
        raise ValueError("search radius must be >= 1")
    best: int | None = None
    witness: tuple[int, ...] | None = None
    examined = 0
    for s in range(1, R + 1):
        if best is not None and best < s:
            break
        for n in shell(orbit.dim, s):
            if not is_canonical(n):
                continue
            examined += 1
            if examined > max_points:
                raise SearchLimitError(f"more than {max_points} lattice points examined (radius {R})")
            value = s * _degree(orbit, n)
            if best is None or value < best or (value == best and n < witness):
                best, witness = value, n
    return GenDegReport(value=best, witness=witness, search_radius=R, examined=examined)


def degree_search_table(orbit: GaloisOrbit, R: int) -> dict[tuple[int, ...], int]:
    """deg(chi^n(xi)) for every n != 0 with ||n||_1 <= R, both signs computed."""
    table = {}
    count = 0
    for s in range(1, R + 1):
        for n in shell(orbit.dim, s):
            count += 1
            if count > MAX_LATTICE_POINTS:
                raise SearchLimitError(f"table larger than {MAX_LATTICE_POINTS} entries")
            table[n] = _degree(orbit, n)
    return table


def write_table_csv(table: dict[tuple[int, ...], int], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "deg", "product"])
        for n, d in table.items():
            norm = sum(abs(v) for v in n)
            w.writerow([" ".join(str(v) for v in n), d, norm * d])
