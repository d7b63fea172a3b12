"""Both sides of the quantitative equidistribution inequality, its two-term
decomposition, the one-dimensional sphere bound, the bound on the orbit
Fourier-Stieltjes coefficients, and family sweeps.
"""

from __future__ import annotations

import csv
import functools
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .functions import NotApplicable, TestFunction, function_from_dict
from .gendeg import GenDegReport, generalized_degree
from .harmonic import (
    DEFAULT_BOX,
    c_of_F,
    derivative_l1_sum,
    fourier_stieltjes,
    fourier_stieltjes_at,
    haar_integral,
    pair_spectra,
)
from .heights import HeightReport, point_height
from .mollifier import circle_average, lipschitz_bound, optimize_delta
from .orbits import PRODUCT, AlgebraicPointSpec, GaloisOrbit, enumerate_orbit, point_from_dict
from .polynomial import IntPolynomial, RatPolynomial, cyclotomic
from .roots import ComplexRootSet

C_MAIN = 64.0
C_FRL = 15.0
TOL = 1e-9
PAIRING_TOL = 1e-8


def log_degree_term(h: float, D: int, C: float = C_MAIN) -> float:
    """(4 h + C log(D + 1) / D)^(1/2)."""
    if D < 1:
        raise ValueError("degree must be >= 1")
    return math.sqrt(4.0 * h + C * math.log(D + 1) / D)


@dataclass
class PointData:
    """A point with everything the inequality needs: orbit, height and generalized degree."""

    spec: AlgebraicPointSpec
    orbit: GaloisOrbit
    height: HeightReport
    gendeg: GenDegReport

    @property
    def h(self) -> float:
        return self.height.total_h

    @property
    def name(self) -> str:
        return self.spec.name


def analyze_point(spec: AlgebraicPointSpec, orbit: GaloisOrbit | None = None) -> PointData:
    if orbit is None:
        orbit = enumerate_orbit(spec)
    return PointData(spec, orbit, point_height(spec, orbit), generalized_degree(orbit))


def orbit_average(F: TestFunction, orbit: GaloisOrbit) -> float:
    """Mean of F over the orbit in logarithmic-polar coordinates."""
    return float(np.mean(F(orbit.angles, orbit.log_moduli)))


@dataclass
class DiscrepancyReport:
    point: str
    function: str
    N: int
    D: int
    h: float
    gendeg: int
    lip: float
    c_F: float
    haar: float
    average: float
    lhs: float
    rhs: float
    T1: float
    T2_direct: float
    T2_pairing: float
    pairing_tail: float
    propsum1_bound: float
    propsum2_bound: float
    rhs_tight: float
    delta_star: float
    precondition_h: bool
    ok: bool | None
    triangle_ok: bool
    propsum1_ok: bool
    propsum2_ok: bool | None
    pairing_ok: bool
    smoothness_verified: bool
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)


@functools.lru_cache(maxsize=1)
def _delta_star():
    return optimize_delta()


def theorem_main(point: PointData, F: TestFunction, box: int = DEFAULT_BOX) -> DiscrepancyReport:
    """Evaluate |int F dmu_S - int F dlambda| against c(F) (4h + 64 log(D+1)/D)^(1/2)."""
    orbit = point.orbit
    if F.dim != orbit.dim:
        raise ValueError(f"function of dimension {F.dim} paired with a point of dimension {orbit.dim}")
    if point.gendeg is None:
        raise ValueError("missing ingredient: generalized degree")
    table = F.spectrum(box)
    cF = c_of_F(F, table)
    if not math.isfinite(cF):
        raise ValueError("missing ingredient: finite c(F)")
    h, gd = point.h, point.gendeg.value
    haar = haar_integral(table)
    avg = orbit_average(F, orbit)
    avg0 = float(np.mean(F.F0(orbit.angles)))
    lhs = abs(avg - haar)
    term = log_degree_term(h, gd)
    rhs = cF * term

    t1 = abs(avg - avg0)
    t2 = abs(avg0 - haar)
    pairing, tail = pair_spectra(table, fourier_stieltjes(orbit, table.radius))
    # the pairing is real up to rounding for real F0
    pairing_gap = abs(pairing + haar - avg0)
    opt = _delta_star()
    dsum = derivative_l1_sum(table)
    p1 = 2.0 * F.lip_constant * h
    p2 = opt.value / (2 * math.pi) * term * dsum
    precond = h <= 1.0
    notes = []
    if point.spec.assertion:
        notes.append(point.spec.assertion)
    if not F.smoothness_verified:
        notes.append("unverified smoothness: torus restriction given by samples")
    if not precond:
        notes.append("h > 1: the inequality's hypothesis fails, ok is not evaluated")
    return DiscrepancyReport(
        point=point.name,
        function=F.name,
        N=orbit.dim,
        D=orbit.D,
        h=h,
        gendeg=gd,
        lip=float(F.lip_constant),
        c_F=float(cF),
        haar=haar,
        average=avg,
        lhs=lhs,
        rhs=float(rhs),
        T1=t1,
        T2_direct=t2,
        T2_pairing=abs(pairing),
        pairing_tail=tail,
        propsum1_bound=float(p1),
        propsum2_bound=float(p2),
        rhs_tight=float(p1 + p2),
        delta_star=opt.delta,
        precondition_h=precond,
        ok=bool(lhs <= rhs + TOL) if precond else None,
        triangle_ok=bool(lhs <= t1 + t2 + TOL),
        propsum1_ok=bool(t1 <= p1 + TOL),
        propsum2_ok=bool(t2 <= p2 + TOL) if precond else None,
        pairing_ok=bool(pairing_gap <= PAIRING_TOL + tail),
        smoothness_verified=F.smoothness_verified,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# one-dimensional bound on the sphere


@dataclass(frozen=True)
class BoundResult:
    lhs: float
    rhs: float
    ok: bool

    def to_json(self) -> dict:
        return asdict(self)


def frl_rhs(lip_sph: float, h: float, deg: int, C0: float = C_FRL) -> float:
    """Lip_sph(f) (pi / deg + (4 h + C0 log(deg + 1) / deg)^(1/2))."""
    return lip_sph * (math.pi / deg + log_degree_term(h, deg, C0))


def frl_bound_1d(values, h: float, deg: int, f: Callable[[np.ndarray], np.ndarray], lip_sph: float,
                 nodes: int = 4096) -> BoundResult:
    """|mean of f over (1 : alpha) - int f dlambda_{S^1}| against the one-dimensional bound.

    ``f`` acts on affine coordinates z of (1 : z); the Haar integral over the
    unit circle is a trapezoidal average with ``nodes`` points.
    """
    if isinstance(values, ComplexRootSet):
        z = values.roots
    elif isinstance(values, GaloisOrbit):
        if values.dim != 1:
            raise ValueError("one-dimensional orbit expected")
        z = values.points[:, 0]
    else:
        z = np.asarray(values, dtype=complex)
    if len(z) != deg:
        raise ValueError(f"{len(z)} conjugates given for degree {deg}")
    lhs = abs(complex(np.mean(f(z))) - circle_average(f, nodes))
    rhs = frl_rhs(lip_sph, h, deg)
    return BoundResult(float(lhs), float(rhs), bool(lhs <= rhs + TOL))


def frl_corollary_rhs(lip_sph: float, h: float, deg: int) -> float:
    """The h <= 1 form with C = 64 and no pi/deg term."""
    return lip_sph * log_degree_term(h, deg, C_MAIN)


# ---------------------------------------------------------------------------


def nu_hat_rhs(h: float, gendeg: int, n: Sequence[int], delta: float) -> float:
    norm = sum(abs(int(v)) for v in n)
    return (-2.0 / math.log(delta)) * norm * h + 2.0 * lipschitz_bound(delta) * norm * log_degree_term(h, gendeg)


def nu_hat_bound_check(orbit: GaloisOrbit, h: float, gendeg: int, n: Sequence[int], delta: float) -> BoundResult:
    """|nu_S^(n)| against its height/generalized-degree bound (needs h <= 1)."""
    if h > 1.0:
        raise ValueError("the coefficient bound assumes h <= 1")
    if not any(n):
        raise ValueError("n must be nonzero")
    lhs = abs(fourier_stieltjes_at(orbit, n))
    rhs = nu_hat_rhs(h, gendeg, n, delta)
    return BoundResult(float(lhs), float(rhs), bool(lhs <= rhs + TOL))


# ---------------------------------------------------------------------------
# families


def primes_between(lo: int, hi: int) -> list[int]:
    sieve = np.ones(hi + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(hi**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return [int(p) for p in np.nonzero(sieve)[0] if p >= lo]


def cyclotomic_point(p: int, a: int = 2) -> AlgebraicPointSpec:
    if a % p == 0:
        raise ValueError("the second coordinate would be 1, not a primitive root")
    coords = (RatPolynomial((0, 1)), RatPolynomial(tuple([0] * a + [1])))
    phi = cyclotomic(p)
    return AlgebraicPointSpec(coords=coords, primitive_min_poly=phi, coord_min_polys=(phi, phi),
                              integral=(True, True), name=f"zeta{p}_pow{a}")


def radical_point(k: int, base: int = 2) -> AlgebraicPointSpec:
    poly = IntPolynomial(tuple([-base] + [0] * (k - 1) + [1]))
    return AlgebraicPointSpec(coords=(RatPolynomial((0, 1)),), primitive_min_poly=poly, coord_min_polys=(poly,),
                              integral=(True,), name=f"{base}^(1/{k})")


def mixed_point(k: int) -> AlgebraicPointSpec:
    """(zeta_p, 2^(1/k)) with p the k-th odd prime, presented in product mode."""
    p = primes_between(3, 1000)[k - 1]
    data = {
        "mode": PRODUCT,
        "compositum_degree_asserted": True,
        "coord_min_polys": [list(cyclotomic(p).coeffs), [-2] + [0] * (k - 1) + [1]],
    }
    return point_from_dict(data, name=f"(zeta{p}, 2^(1/{k}))")


def family_members(family: str, start: int | None = None, stop: int | None = None, a: int = 2):
    """(index, spec) pairs in deterministic order."""
    if family == "cyclotomic":
        for p in primes_between(start or 3, stop or 101):
            yield p, cyclotomic_point(p, a)
    elif family == "radical":
        for k in range(start or 1, (stop or 20) + 1):
            yield k, radical_point(k)
    elif family == "mixed":
        for k in range(start or 1, (stop or 8) + 1):
            yield k, mixed_point(k)
    else:
        raise ValueError(f"unknown family {family!r}")


SWEEP_COLUMNS = ["k", "name", "D", "h", "gendeg", "lhs", "rhs", "slack", "c_F", "lip", "ok", "error"]


def sweep_family(members: Iterable[tuple[int, AlgebraicPointSpec]], fn_spec: dict,
                 box: int = DEFAULT_BOX) -> list[dict]:
    """One row per member; failures become rows with an error tag and the sweep continues."""
    rows = []
    for k, spec in members:
        row = {c: "" for c in SWEEP_COLUMNS}
        row.update(k=k, name=spec.name)
        try:
            pt = analyze_point(spec)
            F = function_from_dict(fn_spec, spec.dim)
            rep = theorem_main(pt, F, box)
            row.update(D=rep.D, h=rep.h, gendeg=rep.gendeg, lhs=rep.lhs, rhs=rep.rhs,
                       slack=rep.rhs - rep.lhs, c_F=rep.c_F, lip=rep.lip,
                       ok="" if rep.ok is None else rep.ok)
        except (NotApplicable, ValueError, RuntimeError) as exc:
            row.update(ok=False, error=f"{type(exc).__name__}: {exc}")
        rows.append(row)
    return rows


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_rows_csv(rows: list[dict], columns: Sequence[str], path: str | Path | None, fh=None) -> None:
    def emit(out):
        w = csv.writer(out, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r.get(c, "")) for c in columns])

    if fh is not None:
        emit(fh)
    else:
        with open(path, "w", newline="") as out:
            emit(out)


def default_deltas() -> tuple[float, float]:
    """The two cutoff parameters used by the verification suites: 0.5 and the optimizer."""
    return 0.5, _delta_star().delta
