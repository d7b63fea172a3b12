"""The radial cutoff rho_delta, the phase mollifier f_delta on the Riemann sphere,
spherical and chordal distances, and the delta trade-off optimization.

Points of P^1(C) are pairs (z0 : z1); the affine chart is (1 : z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar


def _check_delta(delta: float) -> None:
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie strictly between 0 and 1, got {delta}")


@dataclass(frozen=True)
class Piece:
    lo: float
    hi: float
    value: Callable[[np.ndarray], np.ndarray]
    slope: Callable[[np.ndarray], np.ndarray]


def rho_pieces(delta: float) -> list[Piece]:
    """The five polynomial pieces of rho_delta on consecutive intervals."""
    _check_delta(delta)
    d = delta
    zero = lambda r: np.zeros_like(np.asarray(r, dtype=float))  # noqa: E731
    one = lambda r: np.ones_like(np.asarray(r, dtype=float))  # noqa: E731
    return [
        Piece(0.0, d / 2, zero, zero),
        Piece(d / 2, d,
              lambda r: (5 * d - 4 * r) * (d - 2 * r) ** 2 / d**3,
              lambda r: -24.0 / d**3 * (d - 2 * r) * (d - r)),
        Piece(d, 1 / d, one, zero),
        Piece(1 / d, 2 / d,
              lambda r: (-2 + d * r) ** 2 * (-1 + 2 * d * r),
              lambda r: 6 * d * (-2 + d * r) * (-1 + d * r)),
        Piece(2 / d, math.inf, zero, zero),
    ]


def _piecewise(delta: float, r, which: str) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("r must be non-negative")
    out = np.zeros_like(r)
    for i, p in enumerate(rho_pieces(delta)):
        # closed on the left for the inner pieces so every r lands in exactly one
        mask = (r >= p.lo) & (r < p.hi) if i < 4 else r >= p.lo
        if np.any(mask):
            out[mask] = getattr(p, which)(r[mask])
    return out


def rho(delta: float, r):
    """C^1 cutoff: 0 below delta/2, 1 on [delta, 1/delta], 0 beyond 2/delta."""
    out = _piecewise(delta, r, "value")
    return float(out) if out.ndim == 0 else out


def rho_prime(delta: float, r):
    out = _piecewise(delta, r, "slope")
    return float(out) if out.ndim == 0 else out


def rho_prime_bound(delta: float) -> float:
    _check_delta(delta)
    return 3.0 / delta


@dataclass(frozen=True)
class SpherePoint:
    """(z0 : z1) in P^1(C), stored with max(|z0|, |z1|) = 1."""

    z0: complex
    z1: complex

    def __post_init__(self):
        a, b = complex(self.z0), complex(self.z1)
        s = max(abs(a), abs(b))
        if s == 0:
            raise ValueError("(0 : 0) is not a point of P^1")
        object.__setattr__(self, "z0", a / s)
        object.__setattr__(self, "z1", b / s)

    @classmethod
    def chart(cls, z: complex) -> "SpherePoint":
        return cls(1.0, z)

    @classmethod
    def infinity(cls) -> "SpherePoint":
        return cls(0.0, 1.0)


def f_delta_chart(delta: float, z) -> np.ndarray:
    """f_delta(1 : z) = rho_delta(|z|) z / |z| for an array of affine coordinates."""
    z = np.asarray(z, dtype=complex)
    r = np.abs(z)
    out = np.zeros_like(z)
    nz = r > 0
    out[nz] = rho(delta, r[nz]) * z[nz] / r[nz]
    return out


def f_delta(delta: float, p: SpherePoint) -> complex:
    _check_delta(delta)
    if p.z0 == 0:
        return 0j
    return complex(f_delta_chart(delta, np.array([p.z1 / p.z0]))[0])


def u_delta(delta: float, z) -> np.ndarray:
    return f_delta_chart(delta, z).real


def v_delta(delta: float, z) -> np.ndarray:
    return f_delta_chart(delta, z).imag


def sphere_distances(z0, z1, w0, w1) -> tuple[np.ndarray, np.ndarray]:
    """(d_sph, d_ch) between (z0 : z1) and (w0 : w1); arrays broadcast.

    The arc length is 2 arccos(|<p, q>| / |p||q|); we evaluate it as
    2 atan2(|det|, |<p, q>|), which is the same angle and stays accurate
    for nearby points where arccos loses half the digits.
    """
    z0, z1, w0, w1 = (np.asarray(a, dtype=complex) for a in (z0, z1, w0, w1))
    det = np.abs(z0 * w1 - z1 * w0)
    inner = np.abs(z0 * np.conj(w0) + z1 * np.conj(w1))
    norms = np.sqrt(np.abs(z0) ** 2 + np.abs(z1) ** 2) * np.sqrt(np.abs(w0) ** 2 + np.abs(w1) ** 2)
    return 2.0 * np.arctan2(det, inner), 2.0 * det / norms


def sphere_distance_points(p: SpherePoint, q: SpherePoint) -> tuple[float, float]:
    s, c = sphere_distances(p.z0, p.z1, q.z0, q.z1)
    return float(s), float(c)


def lipschitz_bound(delta: float) -> float:
    """Spherical Lipschitz bound 2 sqrt(2) (delta^2 + 9) / delta^3 for u_delta and v_delta."""
    _check_delta(delta)
    return 2.0 * math.sqrt(2.0) * (delta**2 + 9.0) / delta**3


def objective(delta: float) -> float:
    """-2/log(delta) + 4 sqrt(2) (delta^2 + 9) / delta^3."""
    _check_delta(delta)
    return -2.0 / math.log(delta) + 2.0 * lipschitz_bound(delta)


@dataclass(frozen=True)
class DeltaOptimum:
    delta: float
    value: float

    @property
    def value_over_2pi(self) -> float:
        return self.value / (2 * math.pi)

    def to_json(self) -> dict:
        return {"delta": self.delta, "value": self.value, "value_over_2pi": self.value_over_2pi}


def optimize_delta(grid_points: int = 1000, tol: float = 1e-6) -> DeltaOptimum:
    """Grid pre-scan over (0, 1) followed by golden-section refinement."""
    grid = np.linspace(0.0, 1.0, grid_points + 2)[1:-1]
    vals = np.array([objective(d) for d in grid])
    i = int(np.argmin(vals))
    if i == 0 or i == len(grid) - 1:
        raise RuntimeError("minimum of the pre-scan lies on the grid boundary")
    bracket = (grid[i - 1], grid[i], grid[i + 1])
    res = minimize_scalar(objective, bracket=bracket, method="golden", tol=tol * 1e-2)
    return DeltaOptimum(float(res.x), float(res.fun))


def estimate_lipschitz(component: str, delta: float, samples: int = 100_000, seed: int = 0,
                       local_fraction: float = 0.5, local_scale: float = 1e-3) -> float:
    """Empirical sup of |f(p) - f(q)| / d_sph(p, q) over random pairs in the chart.

    Moduli are drawn log-uniformly on [delta/4, 4/delta], which covers the
    support of rho_delta with margin.  A fraction of the pairs are perturbations
    at spherical scale below ``local_scale``, where the sup is typically found.
    """
    _check_delta(delta)
    if component not in ("u", "v"):
        raise ValueError("component must be 'u' or 'v'")
    fn = u_delta if component == "u" else v_delta
    rng = np.random.default_rng(seed)
    lo, hi = math.log(delta / 4), math.log(4 / delta)

    def draw(k):
        return np.exp(rng.uniform(lo, hi, k) + 2j * np.pi * rng.random(k))

    z = draw(samples)
    w = draw(samples)
    k = int(samples * local_fraction)
    # a chart step dz moves the sphere point by about 2|dz| / (1 + |z|^2)
    step = local_scale * (1 + np.abs(z[:k]) ** 2) / 4
    w[:k] = z[:k] + step * rng.uniform(0, 1, k) * np.exp(2j * np.pi * rng.random(k))
    d_sph, _ = sphere_distances(1.0, z, 1.0, w)
    ok = d_sph > 0
    ratio = np.abs(fn(delta, z) - fn(delta, w))[ok] / d_sph[ok]
    return float(ratio.max())


def circle_average(f: Callable[[np.ndarray], np.ndarray], nodes: int = 4096) -> complex:
    """Trapezoidal average of f over the unit circle (Haar probability measure)."""
    z = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    return complex(np.mean(f(z)))
