"""Exact integer and modular arithmetic shared by every other module.

Everything here is pure and works on plain Python integers, so the
functions are thread-safe by construction.  Factorization is meant for
inputs below 2**63: trial division by the primes up to 10**6 first,
then deterministic Miller-Rabin plus Brent-cycle Pollard rho for the
remaining cofactor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

__all__ = [
    "NoInverseError",
    "ResidueClass",
    "FactoredModulus",
    "factorize",
    "is_prime",
    "jacobi",
    "inv_mod",
    "crt_combine",
    "gcd_average",
    "as_modulus",
]

_MAX_FACTOR_INPUT = 1 << 63
_TRIAL_BOUND = 10**6


class NoInverseError(ValueError):
    """Requested a modular inverse of a residue that is not a unit."""


@dataclass(frozen=True)
class ResidueClass:
    """An integer residue normalised into [0, modulus)."""

    value: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError("modulus must be a positive integer")
        object.__setattr__(self, "value", self.value % self.modulus)

    def __int__(self) -> int:
        return self.value


@dataclass(frozen=True)
class FactoredModulus:
    """A positive integer together with its full prime factorization.

    ``factors`` is a tuple of (prime, exponent) pairs sorted by prime.
    ``s0`` is the squarefree part (product of the primes appearing to
    the first power) and ``s1`` the squarefull part (product of all
    p**e with e >= 2), so n == s0 * s1 and gcd(s0, s1) == 1.
    """

    n: int
    factors: tuple[tuple[int, int], ...]
    s0: int
    s1: int

    def __int__(self) -> int:
        return self.n

    @property
    def is_odd(self) -> bool:
        return self.n % 2 == 1

    @property
    def is_squarefree(self) -> bool:
        return self.s1 == 1

    def phi(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= (p - 1) * p ** (e - 1)
        return out

    def divisor_count(self) -> int:
        out = 1
        for _, e in self.factors:
            out *= e + 1
        return out

    def prime_powers(self) -> list[int]:
        return [p**e for p, e in self.factors]


@lru_cache(maxsize=1)
def _small_primes() -> list[int]:
    # simple sieve; at most one pass per process
    bound = _TRIAL_BOUND
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(bound + 1) if sieve[i]]


_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for every n below 2**64."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """One nontrivial factor of odd composite n (Brent's cycle variant).

    Deterministic: the (x0, c) parameters walk a fixed schedule until a
    factor shows up, which for composite n always happens.
    """
    if n % 2 == 0:
        return 2
    c = 1
    x0 = 2
    while True:
        y, r, q = x0, 1, 1
        g = 1
        x = y
        ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1
        x0 += 1


def _factor_into(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _brent_rho(n)
    _factor_into(d, out)
    _factor_into(n // d, out)


def factorize(n: int) -> FactoredModulus:
    """Full factorization of 1 <= n < 2**63."""
    if not 1 <= n < _MAX_FACTOR_INPUT:
        raise ValueError(f"factorize expects 1 <= n < 2**63, got {n}")
    rem = n
    fac: dict[int, int] = {}
    limit = math.isqrt(rem)
    for p in _small_primes():
        if p > limit:
            break
        if rem % p == 0:
            e = 0
            while rem % p == 0:
                rem //= p
                e += 1
            fac[p] = e
            limit = math.isqrt(rem)
    if rem > 1:
        _factor_into(rem, fac)
    factors = tuple(sorted(fac.items()))
    s0 = 1
    s1 = 1
    for p, e in factors:
        if e == 1:
            s0 *= p
        else:
            s1 *= p**e
    return FactoredModulus(n=n, factors=factors, s0=s0, s1=s1)


def as_modulus(r) -> FactoredModulus:
    """Coerce an int (or pass through a FactoredModulus)."""
    if isinstance(r, FactoredModulus):
        return r
    return factorize(int(r))


def jacobi(a: int, c: int) -> int:
    """Jacobi symbol (a | c) for odd positive c.

    Standard binary algorithm via quadratic reciprocity; returns 0
    exactly when gcd(a, c) > 1.
    """
    if c <= 0 or c % 2 == 0:
        raise ValueError(f"jacobi symbol needs odd positive c, got {c}")
    a %= c
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if c % 8 in (3, 5):
                result = -result
        a, c = c, a
        if a % 4 == 3 and c % 4 == 3:
            result = -result
        a %= c
    return result if c == 1 else 0


def inv_mod(x: int, m: int) -> ResidueClass:
    """Inverse of x modulo m; raises NoInverseError when gcd(x, m) > 1."""
    if m < 1:
        raise ValueError("modulus must be positive")
    try:
        v = pow(x, -1, m)
    except ValueError as exc:
        raise NoInverseError(f"{x} is not invertible mod {m}") from exc
    return ResidueClass(v, m)


def crt_combine(residues: Sequence[ResidueClass]) -> ResidueClass:
    """Combine residues with pairwise coprime moduli into one class.

    The empty combination is the zero class mod 1.
    """
    v, m = 0, 1
    for rc in residues:
        if math.gcd(m, rc.modulus) != 1:
            raise ValueError(
                f"moduli {m} and {rc.modulus} are not coprime; "
                "combination is ambiguous or empty"
            )
        # v' = v (mod m), v' = rc.value (mod rc.modulus)
        inc = (rc.value - v) * pow(m, -1, rc.modulus) % rc.modulus
        v += m * inc
        m *= rc.modulus
        v %= m
    return ResidueClass(v, m)


def _mobius_coprime_count(x: int, primes: Sequence[int]) -> int:
    """#{1 <= k <= x : gcd(k, product(primes)) == 1} by inclusion-exclusion."""
    total = 0
    npr = len(primes)

    def rec(i: int, d: int, sign: int) -> None:
        nonlocal total
        total += sign * (x // d)
        for jx in range(i, npr):
            rec(jx + 1, d * primes[jx], -sign)

    rec(0, 1, 1)
    return total


def gcd_average(r, M: int) -> int:
    """Exact value of sum_{m=1}^{M} gcd(r, m).

    Direct loop for small M; above 10**5 the divisor-sum form
    sum_{d | r} d * #{k <= M/d : gcd(k, r/d) = 1} is used instead.
    Both are exact integer computations.
    """
    rm = as_modulus(r)
    n = rm.n
    if M < 0:
        raise ValueError("M must be nonnegative")
    if M <= 10**5:
        return sum(math.gcd(n, m) for m in range(1, M + 1))
    total = 0
    divisors = [1]
    for p, e in rm.factors:
        divisors = [d * p**k for d in divisors for k in range(e + 1)]
    for d in divisors:
        cof = n // d
        primes = [p for p, _ in rm.factors if cof % p == 0]
        total += d * _mobius_coprime_count(M // d, primes)
    return total
