"""Mahler measures and Weil heights."""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .orbits import (
    PRIMITIVE,
    AlgebraicPointSpec,
    GaloisOrbit,
    OrbitError,
    enumerate_orbit,
    one_dimensional_orbit,
)
from .polynomial import (
    EXACT_MINPOLY_MAX_DEGREE,
    IntPolynomial,
    coordinate_minimal_polynomial,
    squarefree_decomposition,
)
from .roots import ComplexRootSet, find_roots

NEAR_CIRCLE_GUARD = 1e-3


class HeightUnavailable(ValueError):
    def __init__(self, coordinates: Sequence[int]):
        listed = ", ".join(str(l + 1) for l in coordinates)
        super().__init__(
            f"no height path for coordinate(s) {listed}: supply coord_min_polys or declare them integral"
        )
        self.coordinates = list(coordinates)


class NearCircleWarning(UserWarning):
    def __init__(self, distance: float):
        super().__init__(f"root at distance {distance:.3e} from the unit circle; quadrature degraded")
        self.distance = distance


def _log_plus(x: np.ndarray) -> np.ndarray:
    return np.log(np.maximum(1.0, x))


def mahler_measure_roots(p: IntPolynomial) -> float:
    """log|a_d| + sum of log max(1, |root|), counted with multiplicity."""
    if p.degree < 1:
        return math.log(abs(p.leading)) if p.leading else -math.inf
    total = math.log(abs(p.leading))
    for factor, mult in squarefree_decomposition(p):
        if factor.degree == 1 and factor.coeffs[0] == 0:
            continue  # the root 0 contributes nothing
        rs = find_roots(factor, require_nonzero=False)
        total += mult * math.fsum(_log_plus(rs.moduli()))
    return total


def mahler_measure_quadrature(p: IntPolynomial, nodes: int = 2**16) -> float:
    """Trapezoidal average of log|p| over ``nodes`` equispaced points of the unit circle."""
    if nodes < 1:
        raise ValueError("nodes must be positive")
    if p.degree >= 1:
        nearest = near_circle_distance(p)
        if nearest < NEAR_CIRCLE_GUARD:
            warnings.warn(NearCircleWarning(nearest))
    z = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    vals = np.abs(np.polyval(np.array(p.coeffs[::-1], dtype=float), z))
    with np.errstate(divide="ignore"):
        return float(np.mean(np.log(vals)))


def near_circle_distance(p: IntPolynomial) -> float:
    dist = math.inf
    for factor, _ in squarefree_decomposition(p):
        if factor.degree == 1 and factor.coeffs[0] == 0:
            dist = min(dist, 1.0)
            continue
        rs = find_roots(factor, require_nonzero=False)
        dist = min(dist, float(np.min(np.abs(rs.moduli() - 1.0))))
    return dist


def coordinate_height(min_poly: IntPolynomial) -> tuple[float, int]:
    min_poly.check_minimal_polynomial()
    return mahler_measure_roots(min_poly) / min_poly.degree, min_poly.degree


def integral_orbit_height(values: np.ndarray) -> float:
    """(1/deg) sum log+|alpha| over the distinct conjugates of an algebraic integer."""
    return float(math.fsum(_log_plus(np.abs(values))) / len(values))


@dataclass
class CoordinateHeight:
    h: float
    method: str
    degree: int
    mahler: float
    min_poly: str | None = None
    min_poly_source: str | None = None


@dataclass
class HeightReport:
    per_coordinate: list[CoordinateHeight]
    total_h: float
    notes: list[str] = field(default_factory=list)

    @property
    def degree_per_coordinate(self) -> list[int]:
        return [c.degree for c in self.per_coordinate]

    @property
    def mahler_per_coordinate(self) -> list[float]:
        return [c.mahler for c in self.per_coordinate]

    def to_json(self) -> dict:
        return {
            "per_coordinate": [asdict(c) for c in self.per_coordinate],
            "total_h": self.total_h,
            "degree_per_coordinate": self.degree_per_coordinate,
            "mahler_per_coordinate": self.mahler_per_coordinate,
            "notes": self.notes,
        }


def resolve_min_poly(spec: AlgebraicPointSpec, l: int) -> tuple[IntPolynomial | None, str | None]:
    if spec.coord_min_polys is not None and spec.coord_min_polys[l] is not None:
        return spec.coord_min_polys[l], "supplied"
    if spec.mode == PRIMITIVE and spec.primitive_min_poly.degree <= EXACT_MINPOLY_MAX_DEGREE:
        return coordinate_minimal_polynomial(spec.primitive_min_poly, spec.coords[l]), "exact-resultant"
    return None, None


def point_height(spec: AlgebraicPointSpec, orbit: GaloisOrbit | None = None,
                 method: str = "roots") -> HeightReport:
    """Height h(xi) = sum_l h(xi_l), recording how each coordinate was handled.

    ``method`` is ``roots``, ``quadrature`` or ``both``; it only affects
    coordinates whose minimal polynomial is known.
    """
    if method not in ("roots", "quadrature", "both"):
        raise ValueError(f"unknown height method {method!r}")
    if orbit is None:
        orbit = enumerate_orbit(spec)
    per: list[CoordinateHeight] = []
    missing: list[int] = []
    notes: list[str] = []
    for l in range(spec.dim):
        poly, source = resolve_min_poly(spec, l)
        if poly is not None:
            m_roots = mahler_measure_roots(poly)
            used = "roots"
            m = m_roots
            if method in ("quadrature", "both"):
                m_quad = mahler_measure_quadrature(poly)
                if method == "quadrature":
                    m, used = m_quad, "quadrature"
                else:
                    notes.append(f"coordinate {l + 1}: roots {m_roots:.12g}, quadrature {m_quad:.12g}")
            per.append(CoordinateHeight(m / poly.degree, used, poly.degree, m, str(poly), source))
        elif spec.is_integral(l):
            sub = one_dimensional_orbit(orbit, l)
            h = integral_orbit_height(sub.points[:, 0])
            per.append(CoordinateHeight(h, "orbit-integer", sub.D, h * sub.D))
        else:
            missing.append(l)
    if missing:
        raise HeightUnavailable(missing)
    total = math.fsum(c.h for c in per)
    if spec.assertion:
        notes.append(spec.assertion)
    return HeightReport(per_coordinate=per, total_h=total, notes=notes)


def set_height(orbits: Iterable[tuple[GaloisOrbit | ComplexRootSet | Sequence, float]]) -> float:
    """Height of a Galois-invariant set given as disjoint orbits with their per-point heights."""
    total = []
    for orb, h in orbits:
        if isinstance(orb, GaloisOrbit):
            size = orb.D
        elif isinstance(orb, ComplexRootSet):
            size = orb.degree
        else:
            size = len(orb)
        total.append(size * h)
    return math.fsum(total)


@dataclass(frozen=True)
class BoundCheck:
    lhs: float
    bound: float
    ok: bool


def check_log_sum(orbit: GaloisOrbit, h: float) -> BoundCheck:
    """(1/D) sum_l sum_j |log|xi_{j,l}|| against 2 h(xi)."""
    lhs = float(math.fsum(np.abs(orbit.log_moduli).ravel()) / orbit.D)
    bound = 2.0 * h
    return BoundCheck(lhs, bound, lhs <= bound + 1e-9)


@dataclass(frozen=True)
class TailCount:
    count: int
    bound: float
    ok: bool


def check_tail_count(orbit_1d, delta: float, set_h: float) -> TailCount:
    """#{alpha : |log|alpha|| > log(1/delta)} against 2 h(S) / log(1/delta)."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if isinstance(orbit_1d, ComplexRootSet):
        logs = orbit_1d.log_moduli()
    elif isinstance(orbit_1d, GaloisOrbit):
        if orbit_1d.dim != 1:
            raise OrbitError("tail count needs a one-dimensional orbit")
        logs = orbit_1d.log_moduli[:, 0]
    else:
        logs = np.log(np.abs(np.asarray(orbit_1d, dtype=complex)))
    threshold = math.log(1.0 / delta)
    count = int(np.sum(np.abs(logs) > threshold))
    bound = 2.0 * set_h / threshold
    return TailCount(count, bound, count == 0 or count < bound)
