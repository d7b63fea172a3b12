"""Test functions F(theta, u) = T(theta) * psi(||u||_2) on (R/Z)^N x R^N.

T is the torus part (F restricted to the unit polycircle) and psi a radial
profile with psi(0) = 1.  Lipschitz constants are with respect to the
logarithmic-polar distance, where the angular part is the chord length
between e^{2 pi i theta} and e^{2 pi i theta'} divided by 2 pi.  That chord
is at least (2/pi) times the wrapped angle difference, which is where the
pi/2 factor in the torus Lipschitz bounds comes from.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import ive

from .harmonic import SpectrumTable, fourier_coeffs, trig_eval
from .orbits import SpecError, load_structured

_CHORD_FACTOR = math.pi / 2


class NotApplicable(ValueError):
    """The function spec does not make sense in the requested dimension."""


class TorusPart(Protocol):
    dim: int

    def __call__(self, theta: np.ndarray) -> np.ndarray: ...

    def spectrum(self, box: int) -> SpectrumTable: ...

    def sup_norm(self) -> float: ...

    def lip(self) -> float: ...


# ---------------------------------------------------------------------------
# torus parts


@dataclass
class TrigPolynomial:
    """Real trigonometric polynomial given by its (finite) Fourier coefficients."""

    dim: int
    terms: dict[tuple[int, ...], complex]

    def __post_init__(self):
        for n, c in list(self.terms.items()):
            neg = tuple(-v for v in n)
            if abs(self.terms.get(neg, 0) - np.conj(c)) > 1e-14 * max(1.0, abs(c)):
                raise SpecError(f"coefficients at {n} and {neg} are not conjugate: not a real function")

    @property
    def max_mode(self) -> int:
        return max((max(abs(v) for v in n) for n in self.terms), default=0)

    def spectrum(self, box: int) -> SpectrumTable:
        if box < self.max_mode:
            raise SpecError(f"box {box} smaller than the highest mode {self.max_mode}")
        arr = np.zeros((2 * box + 1,) * self.dim, dtype=complex)
        for n, c in self.terms.items():
            arr[tuple(v + box for v in n)] += c
        return SpectrumTable(arr, tail=0.0, deriv_tails=(0.0,) * self.dim, exact=True)

    def __call__(self, theta):
        theta = np.atleast_2d(np.asarray(theta, dtype=float))
        if not self.terms:
            return np.zeros(theta.shape[0])
        modes = np.array(list(self.terms.keys()), dtype=float)
        coef = np.array(list(self.terms.values()), dtype=complex)
        return (np.exp(2j * np.pi * theta @ modes.T) @ coef).real

    def sup_norm(self) -> float:
        return float(sum(abs(c) for c in self.terms.values()))

    def flat_gradient_bound(self) -> float:
        per_axis = [sum(2 * math.pi * abs(n[l]) * abs(c) for n, c in self.terms.items())
                    for l in range(self.dim)]
        return math.sqrt(sum(a * a for a in per_axis))

    def lip(self) -> float:
        return _CHORD_FACTOR * self.flat_gradient_bound()


def _vm_slope_max(kappa: float) -> float:
    """max_x sin(x) exp(kappa (cos x - 1)), attained where kappa cos^2 x + cos x - kappa = 0."""
    if kappa == 0:
        return 1.0
    c = (-1.0 + math.sqrt(1.0 + 4.0 * kappa * kappa)) / (2.0 * kappa)
    return math.sqrt(1.0 - c * c) * math.exp(kappa * (c - 1.0))


@dataclass
class VonMisesBump:
    """prod_{l in axes} exp(kappa (cos 2 pi theta_l - 1)); coefficients are I_n(kappa) e^-kappa."""

    dim: int
    kappa: float
    axes: tuple[int, ...]

    def __call__(self, theta):
        theta = np.atleast_2d(np.asarray(theta, dtype=float))
        out = np.ones(theta.shape[0])
        for l in self.axes:
            out = out * np.exp(self.kappa * (np.cos(2 * np.pi * theta[:, l]) - 1.0))
        return out

    def _coeffs_1d(self, box: int) -> np.ndarray:
        return ive(np.arange(-box, box + 1), self.kappa)

    def _tails_1d(self, box: int) -> tuple[float, float]:
        """(l1 mass, and sum 2 pi |n| c_n) outside |n| <= box, by summing until negligible."""
        n = np.arange(box + 1, box + 2000)
        c = ive(n, self.kappa)
        return 2 * float(c.sum()), 2 * float((2 * np.pi * n * c).sum())

    def spectrum(self, box: int) -> SpectrumTable:
        one = self._coeffs_1d(box)
        delta = np.zeros(2 * box + 1)
        delta[box] = 1.0
        factors = [one if l in self.axes else delta for l in range(self.dim)]
        arr = factors[0]
        for f in factors[1:]:
            arr = np.multiply.outer(arr, f)
        arr = np.asarray(arr, dtype=complex)
        mass_in, grad_in = float(one.sum()), float((2 * np.pi * np.abs(np.arange(-box, box + 1)) * one).sum())
        mass_out, grad_out = self._tails_1d(box)
        k = len(self.axes)
        # l1 mass of the product outside the box: total^k minus inside^k
        total = mass_in + mass_out
        tail = total**k - mass_in**k
        dtails = []
        for l in range(self.dim):
            if l not in self.axes:
                dtails.append(0.0)
                continue
            # axis l carries 2 pi |n_l|; others carry plain mass
            full = (grad_in + grad_out) * total ** (k - 1)
            inside = grad_in * mass_in ** (k - 1)
            dtails.append(full - inside)
        return SpectrumTable(arr, tail=max(tail, 0.0), deriv_tails=tuple(max(t, 0.0) for t in dtails), exact=True)

    def sup_norm(self) -> float:
        return 1.0

    def lip(self) -> float:
        slope = 2 * math.pi * self.kappa * _vm_slope_max(self.kappa)
        return _CHORD_FACTOR * math.sqrt(len(self.axes)) * slope


@dataclass
class SampledTorus:
    """Grid samples of F0, interpolated by the trigonometric polynomial of the grid spectrum."""

    dim: int
    samples: np.ndarray
    declared_lip: float
    _table: SpectrumTable | None = field(default=None, init=False, repr=False)

    def _grid_table(self) -> SpectrumTable:
        if self._table is None:
            self._table = fourier_coeffs(self.samples)
        return self._table

    def __call__(self, theta):
        return trig_eval(self._grid_table(), theta)

    def spectrum(self, box: int) -> SpectrumTable:
        # the grid resolves at most M/2 - 1 modes; anything beyond sits in the tail
        return fourier_coeffs(self.samples, min(box, self.samples.shape[0] // 2 - 1))

    def sup_norm(self) -> float:
        t = self._grid_table()
        return float(np.abs(t.coeffs).sum() + t.tail)

    def lip(self) -> float:
        return self.declared_lip


# ---------------------------------------------------------------------------
# radial profiles


def _bump(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t, dtype=float)
    inside = np.abs(t) < 1.0
    s = t[inside] ** 2
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - s))
    return out


def _bump_slope(t: float) -> float:
    if not 0 <= t < 1:
        return 0.0
    s = 1.0 - t * t
    return 2 * t * math.exp(1.0 - 1.0 / s) / (s * s)


_BUMP_SLOPE_MAX = -float(minimize_scalar(lambda t: -_bump_slope(t), bounds=(0.0, 1.0), method="bounded",
                                   options={"xatol": 1e-13}).fun)
# guard the numeric maximization
_BUMP_SLOPE_MAX *= 1 + 1e-9


@dataclass(frozen=True)
class RadialBump:
    """psi(r) = exp(1 - 1/(1 - (r/R)^2)) for r < R, else 0: smooth, psi(0) = 1, psi'(0) = 0."""

    radius: float

    def __call__(self, r):
        return _bump(np.asarray(r, dtype=float) / self.radius)

    def lip(self) -> float:
        return _BUMP_SLOPE_MAX / self.radius


# ---------------------------------------------------------------------------


@dataclass
class TestFunction:
    name: str
    torus: TorusPart
    profile: RadialBump | None
    kind: str = "builtin"
    smoothness_verified: bool = True
    spec_digest: str = ""

    __test__ = False  # not a pytest class

    @property
    def dim(self) -> int:
        return self.torus.dim

    @property
    def lip_constant(self) -> float:
        """Product-rule bound ||T||_inf Lip(psi) + ||psi||_inf Lip(T)."""
        lip_t = self.torus.lip()
        if self.profile is None:
            return float(lip_t)
        return float(self.torus.sup_norm() * self.profile.lip() + lip_t)

    def F0(self, theta) -> np.ndarray:
        return self.torus(theta)

    def __call__(self, theta, u) -> np.ndarray:
        t = self.torus(theta)
        if self.profile is None:
            return t
        u = np.atleast_2d(np.asarray(u, dtype=float))
        return t * self.profile(np.linalg.norm(u, axis=1))

    def spectrum(self, box: int) -> SpectrumTable:
        return self.torus.spectrum(box)

    def describe(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "dim": self.dim,
            "lip": self.lip_constant,
            "smoothness_verified": self.smoothness_verified,
            "digest": self.spec_digest,
        }


def log_polar_distance(theta1, u1, theta2, u2) -> np.ndarray:
    d_ang = np.abs(np.sin(np.pi * (np.asarray(theta1) - np.asarray(theta2)))) / np.pi
    du = np.asarray(u1) - np.asarray(u2)
    return np.sqrt(np.sum(d_ang**2, axis=-1) + np.sum(du**2, axis=-1))


def empirical_lipschitz(F: TestFunction, pairs: int = 10_000, seed: int = 0, u_scale: float = 1.5) -> float:
    """max |F(x) - F(y)| / d(x, y) over random pairs, half of them at short range."""
    rng = np.random.default_rng(seed)
    N = F.dim
    th1 = rng.random((pairs, N))
    u1 = rng.normal(scale=u_scale, size=(pairs, N))
    th2 = rng.random((pairs, N))
    u2 = rng.normal(scale=u_scale, size=(pairs, N))
    half = pairs // 2
    step = rng.normal(scale=1e-3, size=(half, 2 * N))
    th2[:half] = th1[:half] + step[:, :N]
    u2[:half] = u1[:half] + step[:, N:]
    d = log_polar_distance(th1, u1, th2, u2)
    ok = d > 0
    ratio = np.abs(F(th1, u1) - F(th2, u2))[ok] / d[ok]
    return float(ratio.max())


# ---------------------------------------------------------------------------
# spec files


def _pad(n, dim: int) -> tuple[int, ...]:
    n = [int(v) for v in n]
    if len(n) > dim:
        if any(n[dim:]):
            raise NotApplicable(f"mode {n} needs dimension {len(n)}")
        n = n[:dim]
    return tuple(n + [0] * (dim - len(n)))


def _trig_terms(terms: list, dim: int) -> dict[tuple[int, ...], complex]:
    out: dict[tuple[int, ...], complex] = {}

    def add(n, c):
        out[n] = out.get(n, 0) + c

    for term in terms:
        n = _pad(term.get("n", []), dim)
        neg = tuple(-v for v in n)
        zero = not any(n)
        if "const" in term:
            add((0,) * dim, float(term["const"]))
        if "cos" in term:
            a = float(term["cos"])
            if zero:
                add(n, a)
            else:
                add(n, a / 2)
                add(neg, a / 2)
        if "sin" in term:
            b = float(term["sin"])
            if not zero:
                add(n, -0.5j * b)
                add(neg, 0.5j * b)
    return {k: v for k, v in out.items() if v != 0}


def _random_trig(dim: int, seed: int, max_mode: int, count: int) -> dict[tuple[int, ...], complex]:
    rng = np.random.default_rng([seed, dim])
    terms = []
    for _ in range(count):
        n = rng.integers(-max_mode, max_mode + 1, size=dim).tolist()
        kind = "cos" if rng.random() < 0.5 else "sin"
        terms.append({"n": n, kind: float(np.round(rng.uniform(-1, 1), 6))})
    return _trig_terms(terms, dim)


def function_from_dict(data: dict, dim: int, name: str = "") -> TestFunction:
    """Instantiate a function spec in dimension ``dim``."""
    try:
        return _function_from_dict(data, dim, name)
    except KeyError as exc:
        raise SpecError(f"missing field {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (SpecError, NotApplicable)):
            raise
        raise SpecError(f"malformed function spec: {exc}") from exc


def _function_from_dict(data: dict, dim: int, name: str) -> TestFunction:
    min_dim = int(data.get("min_dim", 1))
    if dim < min_dim:
        raise NotApplicable(f"function needs dimension >= {min_dim}")
    max_dim = data.get("max_dim")
    if max_dim is not None and dim > int(max_dim):
        raise NotApplicable(f"function defined only up to dimension {max_dim}")
    digest = hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()
    name = data.get("name", name)
    radial = data.get("radial")
    profile = None if radial is None else RadialBump(float(radial["radius"]))
    kind = data.get("kind", "builtin")
    if kind == "sampled":
        samples = np.asarray(data["samples"], dtype=float)
        if samples.ndim != dim:
            raise NotApplicable(f"samples are {samples.ndim}-dimensional")
        if "lip" not in data:
            raise SpecError("sampled functions must declare their Lipschitz constant 'lip'")
        torus = SampledTorus(dim, samples, float(data["lip"]))
        return TestFunction(name, torus, profile, kind="sampled", smoothness_verified=False, spec_digest=digest)

    t = data.get("torus", {"type": "constant", "value": 1.0})
    ttype = t.get("type")
    if ttype == "constant":
        torus = TrigPolynomial(dim, {(0,) * dim: float(t.get("value", 1.0))})
    elif ttype == "trig":
        torus = TrigPolynomial(dim, _trig_terms(t["terms"], dim))
    elif ttype == "cos_sum":
        scale = float(t.get("scale", 1.0)) / dim
        torus = TrigPolynomial(dim, _trig_terms([{"n": [0] * l + [1], "cos": scale} for l in range(dim)], dim))
    elif ttype == "random_trig":
        torus = TrigPolynomial(dim, _random_trig(dim, int(t.get("seed", 0)), int(t.get("max_mode", 3)),
                                                 int(t.get("count", 6))))
    elif ttype == "vonmises":
        axes_spec = t.get("axes", "all")
        axes = tuple(range(dim)) if axes_spec == "all" else tuple(int(a) for a in axes_spec if int(a) < dim)
        torus = VonMisesBump(dim, float(t.get("kappa", 1.0)), axes)
    else:
        raise SpecError(f"unknown torus part type {ttype!r}")
    return TestFunction(name, torus, profile, kind="builtin", spec_digest=digest)


def load_function(path: str | Path, dim: int) -> TestFunction:
    path = Path(path)
    return function_from_dict(load_structured(path), dim, name=path.stem)
