"""Quadratic Gauss sums for odd moduli: direct and closed-form routes.

G(a, b, c) = sum_{n=0}^{c-1} e((a*n^2 + b*n)/c), c odd.

The closed form evaluates this without summation:

* d = gcd(a, c) divides b:   G(a, b, c) = d * G(a/d, b/d, c/d)
* d = gcd(a, c) nondivisor:  G(a, b, c) = 0
* gcd(a, c) = 1 (the core case, c odd so gcd(2a, c) = 1):
      G = eps(c) * (a | c) * e(-inv(4a) * b^2 / c) * sqrt(c)
  with eps(c) = 1 for c = 1 mod 4 and i for c = 3 mod 4.

Phases are reduced to integers modulo c before the transcendental map,
so the only float error is the final exp/sqrt rounding.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import jacobi
from .summation import KahanSum

__all__ = [
    "GaussSumParams",
    "epsilon_c",
    "gauss_direct",
    "gauss_closed_form",
    "gauss_direct_grid",
    "gauss_closed_form_grid",
]

_DIRECT_GUARD = 10**7
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class GaussSumParams:
    """Coefficients (a, b) and an odd modulus c >= 1."""

    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        if self.c < 1 or self.c % 2 == 0:
            raise ValueError(f"modulus must be odd and positive, got {self.c}")


def epsilon_c(c: int) -> complex:
    """The normalising fourth root of unity: 1 if c=1 (4), i if c=3 (4)."""
    if c % 2 == 0:
        raise ValueError(f"epsilon_c needs odd c, got {c}")
    return 1 + 0j if c % 4 == 1 else 1j


def _e_frac(num: int, den: int) -> complex:
    """e(num/den) with the argument reduced mod den first."""
    return cmath.exp(_TWO_PI * 1j * ((num % den) / den))


def gauss_direct(params: GaussSumParams) -> complex:
    """Term-by-term evaluation with compensated accumulation."""
    a, b, c = params.a % params.c, params.b % params.c, params.c
    if c > _DIRECT_GUARD:
        raise ValueError(f"direct summation refused for c > {_DIRECT_GUARD}")
    acc = KahanSum()
    for n in range(c):
        acc.add(_e_frac((a * n * n + b * n) % c, c))
    return acc.value


def gauss_closed_form(params: GaussSumParams) -> complex:
    """Closed-form value; exact up to the final float exp and sqrt."""
    c = params.c
    a = params.a % c
    b = params.b % c
    if c == 1:
        return 1 + 0j
    d = math.gcd(a, c)
    if b % d != 0:
        return 0j
    c1 = c // d
    if c1 == 1:
        return complex(d)
    a1 = (a // d) % c1
    b1 = (b // d) % c1
    inv4a = pow(4 * a1, -1, c1)
    phase = (-inv4a * b1 * b1) % c1
    return d * epsilon_c(c1) * jacobi(a1, c1) * _e_frac(phase, c1) * math.sqrt(c1)


@lru_cache(maxsize=64)
def _unit_roots(c: int) -> np.ndarray:
    return np.exp((_TWO_PI * 1j / c) * np.arange(c))


def gauss_direct_grid(c: int) -> np.ndarray:
    """All values G(a, b, c) for a, b in [0, c) from the defining sum.

    For fixed a the map b -> G(a, b, c) is the length-c inverse DFT of
    n -> e(a*n^2/c), so the three-index grid costs c^2 log c instead of
    c^3.  Returns a (c, c) complex array indexed [a, b].
    """
    if c < 1 or c % 2 == 0:
        raise ValueError(f"modulus must be odd and positive, got {c}")
    n2 = (np.arange(c, dtype=np.int64) ** 2) % c
    roots = _unit_roots(c)
    # rows[a, n] = e(a*n^2/c); row-wise inverse DFT sums e(b*n/c) factors
    rows = roots[np.outer(np.arange(c, dtype=np.int64), n2) % c]
    return np.fft.ifft(rows, axis=1) * c


def gauss_closed_form_grid(c: int) -> np.ndarray:
    """All closed-form values for a, b in [0, c) as a (c, c) array."""
    if c < 1 or c % 2 == 0:
        raise ValueError(f"modulus must be odd and positive, got {c}")
    out = np.zeros((c, c), dtype=np.complex128)
    if c == 1:
        out[0, 0] = 1.0
        return out
    bs = np.arange(c, dtype=np.int64)
    for a in range(c):
        d = math.gcd(a, c)
        c1 = c // d
        if c1 == 1:
            out[a, ::d] = float(d)
            continue
        a1 = (a // d) % c1
        pref = d * epsilon_c(c1) * jacobi(a1, c1) * math.sqrt(c1)
        inv4a = pow(4 * a1, -1, c1)
        b1 = bs[:c1]
        phases = (-inv4a * b1 * b1) % c1
        out[a, ::d] = pref * _unit_roots(c1)[phases]
    return out
