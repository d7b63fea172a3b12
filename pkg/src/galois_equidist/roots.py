"""Simultaneous root finding with certified error radii.

Seeds come from the companion-matrix eigenvalues and are polished with the
Aberth-Ehrlich iteration.  Each returned root z carries the radius
``deg * |p(z)| / |p'(z)|``; some root of p lies within that distance of z
because p'/p = sum 1/(z - r_i).  Both values are evaluated exactly (a float
is a dyadic rational), so the radius is rigorous up to one final rounding.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np

from .polynomial import IntPolynomial, PolynomialError

DEFAULT_PRECISION = 1e-12
_MAX_ITER = 200
_EPS = np.finfo(float).eps


class RootFindingError(RuntimeError):
    def __init__(self, message: str, best_residual: float = math.inf):
        super().__init__(f"{message} (best radius {best_residual:.3e})")
        self.best_residual = best_residual


class SquarefreeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ComplexRootSet:
    roots: np.ndarray
    error_radius: np.ndarray
    source: IntPolynomial
    extended: bool = False
    roots_mp: tuple = field(default=(), repr=False, compare=False)

    @property
    def degree(self) -> int:
        return len(self.roots)

    @property
    def max_radius(self) -> float:
        return float(np.max(self.error_radius)) if len(self.error_radius) else 0.0

    def moduli(self) -> np.ndarray:
        return np.abs(self.roots)

    def log_moduli(self) -> np.ndarray:
        if self.roots_mp:
            return np.array([float(mpmath.log(abs(r))) for r in self.roots_mp])
        return np.log(np.abs(self.roots))


# ---------------------------------------------------------------------------
# exact evaluation at dyadic points


def _dyadic(z: complex) -> tuple[int, int, int]:
    """Write z = (X + iY) / 2**k with integers X, Y."""
    nx, dx = float(z.real).as_integer_ratio()
    ny, dy = float(z.imag).as_integer_ratio()
    kx, ky = dx.bit_length() - 1, dy.bit_length() - 1
    k = max(kx, ky)
    return nx << (k - kx), ny << (k - ky), k


def _horner_gauss(coeffs: tuple[int, ...], x: int, y: int, k: int) -> tuple[int, int]:
    """2**(k*n) * p((x + iy) / 2**k) as a Gaussian integer, n = len(coeffs) - 1."""
    n = len(coeffs) - 1
    re, im = coeffs[n], 0
    for j in range(n - 1, -1, -1):
        re, im = re * x - im * y, re * y + im * x
        re += coeffs[j] << (k * (n - j))
    return re, im


def _log2_abs(re: int, im: int) -> float:
    if re == 0 and im == 0:
        return -math.inf
    shift = max(abs(re).bit_length(), abs(im).bit_length()) - 62
    if shift > 0:
        re >>= shift
        im >>= shift
    else:
        shift = 0
    return math.log2(math.hypot(float(re), float(im))) + shift


def certified_radius(p: IntPolynomial, z: complex) -> float:
    n = p.degree
    x, y, k = _dyadic(complex(z))
    a = _horner_gauss(p.coeffs, x, y, k)
    la = _log2_abs(*a)
    if la == -math.inf:
        return 0.0
    dp = p.derivative()
    b = _horner_gauss(dp.coeffs, x, y, k)
    lb = _log2_abs(*b)
    if lb == -math.inf:
        return math.inf
    # |p(z)| / |p'(z)| = |A| 2^{-kn} / (|B| 2^{-k(n-1)})
    return n * 2.0 ** (la - lb - k) * (1 + 1e-12)


# ---------------------------------------------------------------------------


def _aberth(desc: np.ndarray, z: np.ndarray) -> np.ndarray:
    ddesc = np.polyder(desc)
    n = len(z)
    off = ~np.eye(n, dtype=bool)
    for _ in range(_MAX_ITER):
        pv = np.polyval(desc, z)
        dv = np.polyval(ddesc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dv != 0, pv / dv, 0)
            diff = z[:, None] - z[None, :]
            inv = np.where(off, 1.0 / np.where(off, diff, 1.0), 0.0)
            s = inv.sum(axis=1)
            w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w), w, 0)
        z = z - w
        if np.all(np.abs(w) <= 4 * _EPS * np.maximum(1.0, np.abs(z))):
            break
    return z


def _sort_key(roots: np.ndarray) -> np.ndarray:
    ang = np.mod(np.angle(roots), 2 * np.pi)
    ang = np.round(ang, 10)
    return np.lexsort((np.abs(roots), ang))


def _extended_roots(p: IntPolynomial, dps: int) -> tuple[np.ndarray, np.ndarray, tuple]:
    with mpmath.workdps(dps):
        desc = [mpmath.mpf(c) for c in p.coeffs[::-1]]
        mp_roots = mpmath.polyroots(desc, maxsteps=400, extraprec=4 * dps, cleanup=False)
        if not isinstance(mp_roots, list):
            mp_roots = [mp_roots]
        mp_roots = [mpmath.mpc(r) for r in mp_roots]
        dpoly = [mpmath.mpf(c * i) for i, c in enumerate(p.coeffs)][1:][::-1]
        floats, radii = [], []
        for r in mp_roots:
            pv = abs(mpmath.polyval(desc, r))
            dv = abs(mpmath.polyval(dpoly, r))
            rad_mp = p.degree * pv / dv if dv != 0 else mpmath.inf
            zf = complex(r)
            radii.append(float(rad_mp + abs(mpmath.mpc(zf) - r)) * (1 + 1e-12))
            floats.append(zf)
    return np.array(floats, dtype=complex), np.array(radii), tuple(mp_roots)


def find_roots(
    p: IntPolynomial,
    target_precision: float = DEFAULT_PRECISION,
    *,
    require_nonzero: bool = True,
) -> ComplexRootSet:
    """All complex roots of ``p`` with certified radii <= ``target_precision``."""
    return _find_roots_cached(p, float(target_precision), require_nonzero)


@lru_cache(maxsize=512)
def _find_roots_cached(p: IntPolynomial, target: float, require_nonzero: bool) -> ComplexRootSet:
    if p.degree < 1:
        raise PolynomialError("cannot find roots of a constant polynomial")
    if require_nonzero and p.constant == 0:
        raise PolynomialError("zero constant term: 0 is a root, not an element of Qbar^x")

    desc = np.array(p.coeffs[::-1], dtype=float)
    if p.degree == 1:
        seeds = np.array([-desc[1] / desc[0]], dtype=complex)
    else:
        seeds = np.roots(desc).astype(complex)
    roots = _aberth(desc, seeds) if p.degree > 1 else seeds
    radii = np.array([certified_radius(p, z) for z in roots])
    extended = False
    mp_roots: tuple = ()

    if not np.all(radii <= target):
        best = float(np.max(radii))
        try:
            roots, radii, mp_roots = _extended_roots(p, dps=max(40, 2 * p.degree))
        except mpmath.libmp.NoConvergence as exc:
            raise RootFindingError(f"root refinement did not converge for {p}", best) from exc
        extended = True
        if not np.all(radii <= target):
            raise RootFindingError(
                f"root radii above target {target:.1e} for {p}", float(np.max(radii))
            )

    order = _sort_key(roots)
    roots, radii = roots[order], radii[order]
    if mp_roots:
        mp_roots = tuple(mp_roots[i] for i in order)

    if require_nonzero and np.any(np.abs(roots) <= radii):
        raise PolynomialError(f"cannot certify nonzero roots for {p}")
    if p.degree > 1:
        gaps = np.abs(roots[:, None] - roots[None, :]) + np.diag(np.full(p.degree, np.inf))
        close = gaps <= 10 * np.maximum(radii[:, None], radii[None, :])
        if np.any(close):
            warnings.warn(f"{p} may not be squarefree: two roots are closer than 10 radii", SquarefreeWarning)

    roots.setflags(write=False)
    radii.setflags(write=False)
    return ComplexRootSet(roots=roots, error_radius=radii, source=p, extended=extended, roots_mp=mp_roots)


def residual_bound(p: IntPolynomial, z: complex, scale: float = 1e-12) -> float:
    """(deg+1) * max|a_i| * max(1,|z|)^deg * scale, the acceptance residual."""
    m = max(abs(c) for c in p.coeffs)
    return (p.degree + 1) * m * max(1.0, abs(z)) ** p.degree * scale


def residual(p: IntPolynomial, z: complex) -> float:
    """|p(z)| evaluated exactly at the float z."""
    x, y, k = _dyadic(complex(z))
    a = _horner_gauss(p.coeffs, x, y, k)
    la = _log2_abs(*a)
    return 0.0 if la == -math.inf else 2.0 ** (la - k * p.degree)
