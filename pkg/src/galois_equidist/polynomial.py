"""Exact integer and rational univariate polynomials.

Coefficients are stored in ascending order (a0, a1, ..., ad) as Python ints,
so nothing here ever loses precision.  Numerical evaluation goes through
Horner in complex128; exact work (characteristic polynomials, gcds, the
cyclotomic polynomials) goes through :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
import operator
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

import numpy as np


class PolynomialError(ValueError):
    pass


def _parse_int(value) -> int:
    if isinstance(value, bool):
        raise PolynomialError(f"boolean is not a coefficient: {value!r}")
    if isinstance(value, int):
        return value
    if hasattr(value, "__index__"):
        return operator.index(value)
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError as exc:
            raise PolynomialError(f"not an integer coefficient: {value!r}") from exc
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise PolynomialError(f"not an integer coefficient: {value!r}")


def _trim(coeffs: list) -> list:
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial a0 + a1 x + ... + ad x^d."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable):
        parsed = _trim([_parse_int(c) for c in coeffs])
        if not parsed:
            raise PolynomialError("empty coefficient list")
        object.__setattr__(self, "coeffs", tuple(parsed))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def constant(self) -> int:
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    def check_minimal_polynomial(self) -> None:
        """Reject inputs that cannot be the minimal polynomial of a unit of Qbar."""
        if self.is_zero():
            raise PolynomialError("zero polynomial")
        if self.degree < 1:
            raise PolynomialError("minimal polynomial must have degree >= 1")
        if self.constant == 0:
            raise PolynomialError("zero constant term: polynomial has 0 as a root")

    def derivative(self) -> "IntPolynomial":
        if self.degree == 0:
            return IntPolynomial([0])
        return IntPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, z):
        # np.polyval wants descending order
        return np.polyval(np.array(self.coeffs[::-1], dtype=float), z)

    def float_coeffs(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=float)

    def __str__(self) -> str:
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                coef = "-" if c < 0 else "+"
                terms.append(f"{coef} {mono}")
            else:
                sign = "-" if c < 0 else "+"
                body = f"{abs(c)}{('*' + mono) if mono else ''}"
                terms.append(f"{sign} {body}")
        if not terms:
            return "0"
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]


@dataclass(frozen=True)
class RatPolynomial:
    """(n0 + n1 y + ... + nk y^k) / den with den >= 1 and content reduced."""

    num: tuple[int, ...]
    den: int

    def __init__(self, num: Iterable, den=1):
        n = _trim([_parse_int(c) for c in num])
        d = _parse_int(den)
        if d == 0:
            raise PolynomialError("zero denominator")
        if d < 0:
            n, d = [-c for c in n], -d
        g = d
        for c in n:
            g = gcd(g, c)
        if g > 1:
            n, d = [c // g for c in n], d // g
        object.__setattr__(self, "num", tuple(n))
        object.__setattr__(self, "den", d)

    @classmethod
    def identity(cls) -> "RatPolynomial":
        return cls([0, 1], 1)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.num)

    def fraction_coeffs(self) -> list[Fraction]:
        return [Fraction(c, self.den) for c in self.num]

    def __call__(self, z):
        return np.polyval(np.array(self.num[::-1], dtype=float), z) / self.den

    def eval_error(self, z, dz) -> np.ndarray:
        """Bound on |g(z + e) - fl(g(z))| for |e| <= dz, first order plus rounding."""
        z = np.asarray(z, dtype=complex)
        dz = np.asarray(dz, dtype=float)
        absz = np.abs(z) + dz
        k = len(self.num)
        deriv = np.zeros_like(absz)
        mag = np.zeros_like(absz)
        for i in range(k - 1, -1, -1):
            deriv = deriv * absz + mag
            mag = mag * absz + abs(self.num[i])
        eps = np.finfo(float).eps
        return (deriv * dz + 4.0 * k * eps * mag) / self.den

    def to_json(self) -> dict:
        return {"num": [str(c) for c in self.num], "den": str(self.den)}


# ---------------------------------------------------------------------------
# exact arithmetic over Q, coefficient lists ascending


def _q_trim(p: list[Fraction]) -> list[Fraction]:
    return _trim(list(p)) if p else [Fraction(0)]


def q_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _q_trim(out)


def q_divmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    b = _q_trim(list(b))
    if b == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    r = _q_trim([Fraction(c) for c in a])
    if len(r) < len(b):
        return [Fraction(0)], r
    q = [Fraction(0)] * (len(r) - len(b) + 1)
    lead = b[-1]
    while len(r) >= len(b) and r != [0]:
        shift = len(r) - len(b)
        c = r[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            r[shift + i] -= c * bc
        r.pop()
        r = _q_trim(r)
    return _q_trim(q), r


def q_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    a = _q_trim([Fraction(c) for c in a])
    b = _q_trim([Fraction(c) for c in b])
    while b != [0]:
        _, r = q_divmod(a, b)
        a, b = b, r
    lead = a[-1]
    return [c / lead for c in a]


def q_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _q_trim([x - y for x, y in zip(a, b)])


def q_derivative(a: Sequence[Fraction]) -> list[Fraction]:
    if len(a) <= 1:
        return [Fraction(0)]
    return [i * c for i, c in enumerate(a)][1:]


def squarefree_decomposition(p: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """Yun's algorithm: p = c * prod f_i^i with f_i squarefree and pairwise coprime."""
    a = [Fraction(c) for c in p.coeffs]
    if len(a) <= 1:
        return []
    out = []
    b = q_gcd(a, q_derivative(a))
    c, _ = q_divmod(a, b)
    d, _ = q_divmod(q_derivative(a), b)
    d = q_sub(d, q_derivative(c))
    i = 1
    while len(c) > 1:
        f = q_gcd(c, d)
        if len(f) > 1:
            out.append((to_primitive_int(f), i))
        c, _ = q_divmod(c, f)
        d, _ = q_divmod(d, f)
        d = q_sub(d, q_derivative(c))
        i += 1
    return out


def to_primitive_int(p: Sequence[Fraction]) -> IntPolynomial:
    """Scale a rational polynomial to a primitive integer one with positive leading term."""
    lcm = 1
    for c in p:
        lcm = lcm * c.denominator // gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return IntPolynomial(ints)


def multiplication_matrix(modulus: IntPolynomial, g: RatPolynomial) -> list[list[Fraction]]:
    """Matrix of y -> g(y)*y in Q[y]/(modulus) on the basis 1, y, ..., y^(d-1)."""
    d = modulus.degree
    mod = [Fraction(c) for c in modulus.coeffs]
    _, gred = q_divmod(g.fraction_coeffs(), mod)
    cols = []
    cur = gred
    for _ in range(d):
        col = list(cur) + [Fraction(0)] * (d - len(cur))
        cols.append(col[:d])
        _, cur = q_divmod([Fraction(0)] + list(cur), mod)
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def charpoly(matrix: list[list[Fraction]]) -> list[Fraction]:
    """Characteristic polynomial det(xI - A), ascending, by Faddeev-LeVerrier over Q."""
    n = len(matrix)
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        am = [[sum(matrix[i][t] * m[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        m = [[am[i][j] + coeffs[n - k + 1] * ident[i][j] for j in range(n)] for i in range(n)]
        am = [[sum(matrix[i][t] * m[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        trace = sum(am[i][i] for i in range(n))
        coeffs[n - k] = -trace / k
    return coeffs


EXACT_MINPOLY_MAX_DEGREE = 12


def coordinate_minimal_polynomial(primitive: IntPolynomial, g: RatPolynomial) -> IntPolynomial:
    """Minimal polynomial over Z of g(gamma), gamma a root of the irreducible ``primitive``.

    The characteristic polynomial of multiplication by g(gamma) equals the
    resultant Res_y(primitive(y), den*x - num(y)) up to a constant, and it is
    a power of the minimal polynomial; its squarefree part is the answer.
    """
    if primitive.degree > EXACT_MINPOLY_MAX_DEGREE:
        raise PolynomialError(
            f"exact minimal polynomial only for degree <= {EXACT_MINPOLY_MAX_DEGREE}, got {primitive.degree}"
        )
    cp = charpoly(multiplication_matrix(primitive, g))
    common = q_gcd(cp, q_derivative(cp))
    sqfree, rem = q_divmod(cp, common)
    if rem != [0]:
        raise PolynomialError("internal error: gcd does not divide the characteristic polynomial")
    return to_primitive_int(sqfree)


def int_poly_divexact(a: Sequence[int], b: Sequence[int]) -> list[int]:
    a = list(a)
    b = _trim(list(b))
    q = [0] * (len(a) - len(b) + 1)
    for shift in range(len(a) - len(b), -1, -1):
        top = a[shift + len(b) - 1]
        c, r = divmod(top, b[-1])
        if r:
            raise PolynomialError("inexact integer polynomial division")
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] -= c * bc
    if any(a):
        raise PolynomialError("inexact integer polynomial division")
    return _trim(q)


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> IntPolynomial:
    """The m-th cyclotomic polynomial, via x^m - 1 = prod_{d | m} Phi_d."""
    if m < 1:
        raise PolynomialError("cyclotomic index must be >= 1")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = int_poly_divexact(num, cyclotomic(d).coeffs)
    return IntPolynomial(num)


def poly_from_json(value) -> IntPolynomial:
    if isinstance(value, dict):
        value = value.get("coeffs")
    if not isinstance(value, (list, tuple)):
        raise PolynomialError(f"polynomial must be a coefficient list, got {value!r}")
    return IntPolynomial(value)


def ratpoly_from_json(value) -> RatPolynomial:
    if isinstance(value, (list, tuple)):
        return RatPolynomial(value, 1)
    if not isinstance(value, dict) or "num" not in value:
        raise PolynomialError(f"coordinate must be {{num: [...], den: d}}, got {value!r}")
    return RatPolynomial(value["num"], value.get("den", 1))
