"""Algebraic points of the torus, their Galois orbits and monomial images.

A point xi = (xi_1, ..., xi_N) is presented either through a primitive
element gamma (minimal polynomial M, xi_l = g_l(gamma) with g_l rational
polynomials) or, in product mode, through N independent minimal polynomials
whose compositum is *asserted* to have degree equal to the product of their
degrees.  Orbits are carried in logarithmic-polar form: angles in [0, 1)
(arg / 2pi) and log-moduli.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .polynomial import (
    IntPolynomial,
    PolynomialError,
    RatPolynomial,
    poly_from_json,
    ratpoly_from_json,
)
from .roots import DEFAULT_PRECISION, ComplexRootSet, find_roots

PRIMITIVE = "primitive"
PRODUCT = "product"
PRODUCT_ASSERTION = "compositum degree asserted equal to the product of coordinate degrees (unverified)"
REPRESENTATION_NOTE = "points are presented by a primitive element and coordinate polynomials"


class SpecError(ValueError):
    pass


class OrbitError(RuntimeError):
    pass


class ClusterError(OrbitError):
    def __init__(self, message: str, n=None, diagnostics: dict | None = None):
        super().__init__(message if n is None else f"{message} [n={tuple(n)}]")
        self.n = None if n is None else tuple(int(v) for v in n)
        self.diagnostics = diagnostics or {}


@dataclass(frozen=True)
class AlgebraicPointSpec:
    coords: tuple[RatPolynomial, ...]
    primitive_min_poly: IntPolynomial | None = None
    coord_min_polys: tuple[IntPolynomial | None, ...] | None = None
    mode: str = PRIMITIVE
    integral: tuple[bool, ...] | None = None
    name: str = ""
    description: str = ""

    def __post_init__(self):
        if len(self.coords) < 1:
            raise SpecError("a point needs at least one coordinate")
        if self.mode not in (PRIMITIVE, PRODUCT):
            raise SpecError(f"unknown mode {self.mode!r}")
        if self.mode == PRIMITIVE:
            if self.primitive_min_poly is None:
                raise SpecError("primitive mode needs primitive_min_poly")
            self.primitive_min_poly.check_minimal_polynomial()
            for l, g in enumerate(self.coords):
                if g.is_zero():
                    raise SpecError(f"coordinate {l + 1} is the zero polynomial")
        else:
            if self.coord_min_polys is None or any(p is None for p in self.coord_min_polys):
                raise SpecError("product mode needs a minimal polynomial for every coordinate")
            if len(self.coord_min_polys) != len(self.coords):
                raise SpecError("product mode: coord_min_polys and coords differ in length")
            for p in self.coord_min_polys:
                p.check_minimal_polynomial()
        if self.coord_min_polys is not None and len(self.coord_min_polys) != len(self.coords):
            raise SpecError("coord_min_polys must list one entry per coordinate")
        if self.integral is not None and len(self.integral) != len(self.coords):
            raise SpecError("integral flags must list one entry per coordinate")

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def assertion(self) -> str | None:
        return PRODUCT_ASSERTION if self.mode == PRODUCT else None

    def is_integral(self, l: int) -> bool:
        return bool(self.integral and self.integral[l])

    def to_json(self) -> dict:
        out: dict = {"name": self.name, "mode": self.mode}
        if self.description:
            out["description"] = self.description
        if self.primitive_min_poly is not None:
            out["primitive_min_poly"] = self.primitive_min_poly.to_json()
        out["coords"] = [g.to_json() for g in self.coords]
        if self.coord_min_polys is not None:
            out["coord_min_polys"] = [None if p is None else p.to_json() for p in self.coord_min_polys]
        if self.integral is not None:
            out["integral"] = list(self.integral)
        if self.mode == PRODUCT:
            out["compositum_degree_asserted"] = True
        return out

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def point_from_dict(data: dict, name: str = "") -> AlgebraicPointSpec:
    try:
        mode = data.get("mode", PRIMITIVE)
        cmp = data.get("coord_min_polys")
        coord_min = None if cmp is None else tuple(None if p is None else poly_from_json(p) for p in cmp)
        integral = data.get("integral")
        if mode == PRODUCT:
            if not data.get("compositum_degree_asserted", False):
                raise SpecError("product mode requires compositum_degree_asserted = true")
            if coord_min is None:
                raise SpecError("product mode requires coord_min_polys")
            coords = tuple(RatPolynomial.identity() for _ in coord_min)
            prim = None
        else:
            prim = poly_from_json(data["primitive_min_poly"])
            raw = data.get("coords", [[0, 1]])
            coords = tuple(ratpoly_from_json(c) for c in raw)
        return AlgebraicPointSpec(
            coords=coords,
            primitive_min_poly=prim,
            coord_min_polys=coord_min,
            mode=mode,
            integral=None if integral is None else tuple(bool(v) for v in integral),
            name=data.get("name", name),
            description=data.get("description", ""),
        )
    except KeyError as exc:
        raise SpecError(f"missing field {exc.args[0]!r}") from exc
    except PolynomialError as exc:
        raise SpecError(str(exc)) from exc


def load_structured(path: str | Path) -> dict:
    """Read a JSON or TOML file, reporting the failing line on syntax errors."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".toml":
        try:
            import tomllib  # type: ignore[import-not-found]
        except ModuleNotFoundError:
            import tomli as tomllib
        try:
            return tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise SpecError(f"{path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def load_point(path: str | Path) -> AlgebraicPointSpec:
    path = Path(path)
    try:
        return point_from_dict(load_structured(path), name=path.stem)
    except SpecError as exc:
        if str(exc).startswith(str(path)):
            raise
        raise SpecError(f"{path}: {exc}") from exc


@dataclass(frozen=True)
class GaloisOrbit:
    points: np.ndarray  # (D, N) complex
    angles: np.ndarray  # (D, N) in [0, 1)
    log_moduli: np.ndarray  # (D, N)
    coord_errors: np.ndarray  # (D, N) absolute error bound per value
    spec: AlgebraicPointSpec | None = field(default=None, repr=False, compare=False)

    @property
    def D(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def error_radius(self) -> float:
        return float(np.max(self.coord_errors)) if self.coord_errors.size else 0.0

    def log_errors(self) -> np.ndarray:
        """Error bound on log|alpha| and on 2*pi*angle per value."""
        return self.coord_errors / np.abs(self.points)


def orbit_from_points(points: np.ndarray, errors: np.ndarray | float = 0.0,
                      spec: AlgebraicPointSpec | None = None) -> GaloisOrbit:
    pts = np.asarray(points, dtype=complex)
    if pts.ndim == 1:
        pts = pts[:, None]
    err = np.broadcast_to(np.asarray(errors, dtype=float), pts.shape).copy()
    if np.any(np.abs(pts) <= 10 * err) or np.any(pts == 0):
        raise OrbitError("a coordinate value is within 10 error radii of 0: cannot certify it is nonzero")
    angles = np.mod(np.angle(pts) / (2 * np.pi), 1.0)
    angles[angles >= 1.0] = 0.0
    return GaloisOrbit(points=pts, angles=angles, log_moduli=np.log(np.abs(pts)), coord_errors=err, spec=spec)


def enumerate_orbit(spec: AlgebraicPointSpec, precision: float = DEFAULT_PRECISION) -> GaloisOrbit:
    """Numeric Galois orbit of ``spec``, one row per conjugate point."""
    if spec.mode == PRIMITIVE:
        rs = find_roots(spec.primitive_min_poly, precision)
        gam = rs.roots
        cols, errs = [], []
        for g in spec.coords:
            if rs.roots_mp and len(g.num) > 1:
                import mpmath

                with mpmath.workdps(40):
                    vals = np.array([complex(mpmath.polyval([mpmath.mpf(c) for c in g.num[::-1]], r) / g.den)
                                     for r in rs.roots_mp])
            else:
                vals = g(gam)
            cols.append(vals)
            errs.append(g.eval_error(gam, rs.error_radius))
        points = np.stack(cols, axis=1)
        errors = np.stack(errs, axis=1)
    else:
        sets: list[ComplexRootSet] = [find_roots(p, precision) for p in spec.coord_min_polys]
        idx = list(itertools.product(*[range(s.degree) for s in sets]))
        points = np.array([[s.roots[i] for s, i in zip(sets, row)] for row in idx], dtype=complex)
        errors = np.array([[s.error_radius[i] for s, i in zip(sets, row)] for row in idx], dtype=float)
    return orbit_from_points(points, errors, spec)


@dataclass(frozen=True)
class MonomialImage:
    """All D values chi^n(alpha) in log-polar form with their cluster structure."""

    n: tuple[int, ...]
    log_moduli: np.ndarray
    angles: np.ndarray
    labels: np.ndarray
    deg: int
    multiplicity: int
    tau: float

    def values(self) -> np.ndarray:
        return np.exp(self.log_moduli + 2j * np.pi * self.angles)

    def representatives(self) -> np.ndarray:
        """Indices of one orbit member per distinct value."""
        _, first = np.unique(self.labels, return_index=True)
        return np.sort(first)


def logpolar_distance(u1, a1, u2, a2):
    """Translation-invariant distance on R/Z x R: chord/(2 pi) on the angle, |du| on the modulus."""
    dang = np.abs(np.sin(np.pi * (np.asarray(a1) - np.asarray(a2)))) / np.pi
    return np.hypot(dang, np.asarray(u1) - np.asarray(u2))


def monomial_image(orbit: GaloisOrbit, n: Sequence[int]) -> MonomialImage:
    n = tuple(int(v) for v in n)
    if len(n) != orbit.dim:
        raise ValueError(f"exponent vector of length {len(n)} for a point of dimension {orbit.dim}")
    if not any(n):
        raise ValueError("n must be nonzero")
    nv = np.array(n, dtype=float)
    u = orbit.log_moduli @ nv
    # exact integer combination of angles before reduction mod 1
    ang = np.mod(orbit.angles @ nv, 1.0)
    prop = float(np.max(orbit.log_errors() @ np.abs(nv)))
    tau = max(1e-7, 100.0 * prop)

    dist = logpolar_distance(u[:, None], ang[:, None], u[None, :], ang[None, :])
    adj = dist <= tau
    count, labels = connected_components(csr_matrix(adj), directed=False)
    # relabel in order of first appearance for determinism
    _, first = np.unique(labels, return_index=True)
    remap = {old: new for new, old in enumerate(labels[np.sort(first)])}
    labels = np.array([remap[v] for v in labels])

    if count > 1:
        inter = np.where(labels[:, None] != labels[None, :], dist, np.inf)
        gap = float(inter.min())
        if gap < 10 * tau:
            raise ClusterError(
                f"cluster ambiguity: clusters {gap:.3e} apart, need >= {10 * tau:.3e}",
                n,
                {"gap": gap, "tau": tau},
            )
    sizes = np.bincount(labels)
    D = orbit.D
    if D % count != 0 or np.any(sizes != sizes[0]):
        raise ClusterError(
            f"{count} distinct values do not split the {D} orbit points evenly (sizes {sorted(set(sizes.tolist()))})",
            n,
            {"count": int(count), "sizes": sizes.tolist()},
        )
    return MonomialImage(
        n=n, log_moduli=u, angles=ang, labels=labels, deg=int(count), multiplicity=D // int(count), tau=tau
    )


def one_dimensional_orbit(orbit: GaloisOrbit, l: int) -> GaloisOrbit:
    """Orbit of the single coordinate xi_l, one point per distinct conjugate."""
    e = [0] * orbit.dim
    e[l] = 1
    img = monomial_image(orbit, e)
    idx = img.representatives()
    return GaloisOrbit(
        points=orbit.points[idx, l : l + 1],
        angles=orbit.angles[idx, l : l + 1],
        log_moduli=orbit.log_moduli[idx, l : l + 1],
        coord_errors=orbit.coord_errors[idx, l : l + 1],
    )


def power_orbit(orbit: GaloisOrbit, n: Sequence[int]) -> GaloisOrbit:
    """Orbit of chi^n(xi) in dimension one, built from the distinct monomial values."""
    img = monomial_image(orbit, n)
    idx = img.representatives()
    nv = np.abs(np.array(n, dtype=float))
    vals = img.values()[idx]
    err = (orbit.log_errors()[idx] @ nv) * np.abs(vals)
    return GaloisOrbit(
        points=vals[:, None],
        angles=img.angles[idx][:, None],
        log_moduli=img.log_moduli[idx][:, None],
        coord_errors=err[:, None],
    )

