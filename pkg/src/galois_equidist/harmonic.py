"""Fourier analysis on (R/Z)^N and Z^N.

Spectra live on the box ||n||_inf <= B as dense arrays indexed by n + B.
Everything outside the box is summarized by an l1 tail bound, which is zero
for trigonometric polynomials and an estimate for sampled data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .orbits import GaloisOrbit

DEFAULT_BOX = 32


class GridError(ValueError):
    pass


class SpectrumTailError(RuntimeError):
    pass


@dataclass(frozen=True)
class SpectrumTable:
    coeffs: np.ndarray  # shape (2B+1,)*N
    tail: float = 0.0
    deriv_tails: tuple[float, ...] | None = None
    grid_size: int | None = None
    exact: bool = True

    @property
    def radius(self) -> int:
        return (self.coeffs.shape[0] - 1) // 2

    @property
    def dim(self) -> int:
        return self.coeffs.ndim

    def entry(self, n) -> complex:
        B = self.radius
        if any(abs(v) > B for v in n):
            return 0j
        return complex(self.coeffs[tuple(v + B for v in n)])

    def modes(self) -> np.ndarray:
        """Integer mode vectors matching ``coeffs.reshape(-1)``."""
        B = self.radius
        axes = [np.arange(-B, B + 1)] * self.dim
        grid = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.reshape(-1) for g in grid], axis=1)

    def restrict(self, B: int) -> "SpectrumTable":
        """Smaller box; the dropped l1 mass moves into the tail."""
        cur = self.radius
        if B >= cur:
            return self
        sl = tuple(slice(cur - B, cur + B + 1) for _ in range(self.dim))
        inner = self.coeffs[sl]
        dropped = float(np.abs(self.coeffs).sum() - np.abs(inner).sum())
        dtails = None
        if self.deriv_tails is not None:
            modes = self.modes()
            outside = np.any(np.abs(modes) > B, axis=1)
            flat = np.abs(self.coeffs.reshape(-1))
            dtails = tuple(
                t + float(np.sum(2 * np.pi * np.abs(modes[outside, l]) * flat[outside]))
                for l, t in enumerate(self.deriv_tails)
            )
        return replace(self, coeffs=inner, tail=self.tail + max(dropped, 0.0), deriv_tails=dtails)

    def to_json(self) -> dict:
        modes = self.modes()
        flat = self.coeffs.reshape(-1)
        keep = np.abs(flat) > 0
        return {
            "box": self.radius,
            "dim": self.dim,
            "grid_size": self.grid_size,
            "exact": self.exact,
            "tail_l1": self.tail,
            "entries": [
                {"n": [int(v) for v in m], "re": float(c.real), "im": float(c.imag)}
                for m, c in zip(modes[keep], flat[keep])
            ],
        }


def _is_pow2(m: int) -> bool:
    return m >= 1 and (m & (m - 1)) == 0


def fourier_coeffs(samples: np.ndarray, box: int | None = None) -> SpectrumTable:
    """Coefficients of a function sampled on the M^N grid theta = k/M.

    The discrete transform divided by M^N reproduces trigonometric polynomials
    of degree < M/2 exactly; for other data, grid coefficients outside the box
    give the reported tail estimate.
    """
    samples = np.asarray(samples)
    M = samples.shape[0]
    if any(s != M for s in samples.shape):
        raise GridError("samples must lie on a cubic M^N grid")
    if not _is_pow2(M):
        raise GridError(f"grid size {M} is not a power of two")
    B = box if box is not None else M // 2 - 1
    if M < 2 * B + 2:
        raise GridError(f"grid size {M} too small for box {B}: need M >= {2 * B + 2}")
    N = samples.ndim
    full = np.fft.fftshift(np.fft.fftn(samples)) / M**N
    # after fftshift, index M//2 is mode 0; drop the unpaired Nyquist row
    sl = tuple(slice(M // 2 - B, M // 2 + B + 1) for _ in range(N))
    inner = full[sl]
    freqs = np.fft.fftshift(np.fft.fftfreq(M, 1.0 / M)).astype(int)
    grids = np.meshgrid(*([freqs] * N), indexing="ij")
    outside = np.zeros(full.shape, dtype=bool)
    for g in grids:
        outside |= np.abs(g) > B
    mags = np.abs(full)
    tail = float(mags[outside].sum())
    dtails = tuple(float(np.sum(2 * np.pi * np.abs(g[outside]) * mags[outside])) for g in grids)
    return SpectrumTable(inner, tail=tail, deriv_tails=dtails, grid_size=M, exact=False)


def transform_l1(table: SpectrumTable) -> tuple[float, float]:
    """(sum of |entries| in the box, l1 tail bound outside it)."""
    return float(np.abs(table.coeffs).sum()), table.tail


def derivative_spectrum(table: SpectrumTable, l: int) -> SpectrumTable:
    """Spectrum of dF0/dtheta_l: multiply by 2 pi i n_l."""
    if not 0 <= l < table.dim:
        raise IndexError(f"axis {l} out of range for dimension {table.dim}")
    B = table.radius
    shape = [1] * table.dim
    shape[l] = 2 * B + 1
    factor = (2j * np.pi * np.arange(-B, B + 1)).reshape(shape)
    tail = 0.0 if table.tail == 0 and table.exact else (
        table.deriv_tails[l] if table.deriv_tails is not None else math.inf
    )
    return SpectrumTable(table.coeffs * factor, tail=tail, deriv_tails=None,
                         grid_size=table.grid_size, exact=table.exact)


def haar_integral(table: SpectrumTable) -> float:
    """Integral against Haar measure is the zero coefficient."""
    B = table.radius
    return float(table.coeffs[(B,) * table.dim].real)


def derivative_l1_sum(table: SpectrumTable) -> float:
    """sum_l || (dF0/dtheta_l)^ ||_1 including tails."""
    total = 0.0
    for l in range(table.dim):
        s, t = transform_l1(derivative_spectrum(table, l))
        total += s + t
    return total


def c_of_F(F, table: SpectrumTable | None = None) -> float:
    """2 Lip(F) + 16 sum_l ||(dF0/dtheta_l)^||_1 for a test function F."""
    if table is None:
        table = F.spectrum(DEFAULT_BOX)
    d = derivative_l1_sum(table)
    if not math.isfinite(d):
        raise SpectrumTailError("derivative spectrum tail is unbounded; F0 not certified smooth enough")
    return 2.0 * F.lip_constant + 16.0 * d


@dataclass(frozen=True)
class OrbitSpectrum:
    values: np.ndarray  # shape (2B+1,)*N
    D: int

    @property
    def radius(self) -> int:
        return (self.values.shape[0] - 1) // 2

    @property
    def dim(self) -> int:
        return self.values.ndim

    def at(self, n) -> complex:
        B = self.radius
        return complex(self.values[tuple(int(v) + B for v in n)])


def _letters(k: int) -> str:
    return "abcdefghijklmnopqrstuvwxyz"[:k]


def fourier_stieltjes(orbit: GaloisOrbit, box: int = DEFAULT_BOX) -> OrbitSpectrum:
    """nu_S^(n) = (1/#S) sum exp(-2 pi i n . theta) for all ||n||_inf <= box."""
    N, D = orbit.dim, orbit.D
    if N > 20:
        raise ValueError("dimension too large for a dense box")
    k = np.arange(-box, box + 1)
    # E[l] has shape (D, 2B+1)
    E = [np.exp(-2j * np.pi * np.outer(orbit.angles[:, l], k)) for l in range(N)]
    idx = _letters(N)
    expr = ",".join("z" + c for c in idx) + "->" + idx
    vals = np.einsum(expr, *E, optimize=True) / D
    vals[(box,) * N] = 1.0
    return OrbitSpectrum(values=vals, D=D)


def fourier_stieltjes_at(orbit: GaloisOrbit, n) -> complex:
    nv = np.asarray(n, dtype=float)
    if not np.any(nv):
        return 1.0 + 0j
    phase = orbit.angles @ nv
    return complex(np.mean(np.exp(-2j * np.pi * phase)))


def pair_spectra(table: SpectrumTable, spectrum: OrbitSpectrum) -> tuple[complex, float]:
    """Truncated sum over n != 0 of F0^(n) conj(nu^(n)), with the l1 tail of F0^ as error bound."""
    if table.dim != spectrum.dim:
        raise ValueError("dimension mismatch between test function and orbit")
    B = min(table.radius, spectrum.radius)
    t = table.restrict(B)
    sb = spectrum.radius
    sl = tuple(slice(sb - B, sb + B + 1) for _ in range(spectrum.dim))
    nu = spectrum.values[sl]
    prod = t.coeffs * np.conj(nu)
    prod[(B,) * t.dim] = 0
    return complex(prod.sum()), t.tail


def trig_eval(table: SpectrumTable, theta: np.ndarray) -> np.ndarray:
    """sum_n c_n exp(2 pi i n . theta) over the nonzero entries, real part."""
    theta = np.atleast_2d(np.asarray(theta, dtype=float))
    modes = table.modes()
    flat = table.coeffs.reshape(-1)
    keep = flat != 0
    modes, flat = modes[keep], flat[keep]
    if len(flat) == 0:
        return np.zeros(theta.shape[0])
    phase = theta @ modes.T
    return (np.exp(2j * np.pi * phase) @ flat).real


def grid_samples(func, M: int, dim: int) -> np.ndarray:
    """Evaluate func(theta array (K, dim)) on the grid theta = k/M."""
    axes = [np.arange(M) / M] * dim
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.reshape(-1) for m in mesh], axis=1)
    return np.asarray(func(pts)).reshape((M,) * dim)


def plancherel_gap(samples: np.ndarray, table: SpectrumTable) -> float:
    """|grid L2 norm - l2 norm of the spectrum|."""
    grid_l2 = math.sqrt(float(np.mean(np.abs(samples) ** 2)))
    spec_l2 = math.sqrt(float(np.sum(np.abs(table.coeffs) ** 2)))
    return abs(grid_l2 - spec_l2)

