"""Complete sets of square roots modulo odd integers.

For an odd modulus r and a target s, the object of interest is the full
solution set {k mod r : k*k = s (mod r)}, which can be empty or contain
many elements (its size is multiplicative over the prime powers of r).
Downstream sums always range over the whole set, so these functions
return every root, not a single representative.

Prime case: Tonelli-Shanks with a deterministic ascending search for
the auxiliary non-residue.  Prime power case: Hensel lifting of the
unit part plus explicit handling of the p-adic valuation of the target.
Composite case: CRT recombination across prime powers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .arith import FactoredModulus, ResidueClass, as_modulus, factorize, jacobi

__all__ = [
    "SquareRootSet",
    "sqrt_mod_prime",
    "sqrt_mod_prime_power",
    "sqrt_mod",
]


@dataclass(frozen=True)
class SquareRootSet:
    """All square roots of ``target`` modulo ``modulus.n``, sorted."""

    target: int
    modulus: FactoredModulus
    roots: tuple[ResidueClass, ...]

    @property
    def values(self) -> list[int]:
        return [rc.value for rc in self.roots]

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __contains__(self, k: int) -> bool:
        return k % self.modulus.n in set(self.values)


def _tonelli_prime(s: int, p: int) -> list[int]:
    """Roots of x*x = s (mod p) for odd prime p, as a sorted list."""
    s %= p
    if s == 0:
        return [0]
    if jacobi(s, p) != 1:
        return []
    if p % 4 == 3:
        x = pow(s, (p + 1) // 4, p)
    else:
        # Tonelli-Shanks; the non-residue search is an ascending scan,
        # so the whole computation is deterministic.
        q = p - 1
        e = 0
        while q % 2 == 0:
            q //= 2
            e += 1
        z = 2
        while jacobi(z, p) != -1:
            z += 1
        m = e
        c = pow(z, q, p)
        t = pow(s, q, p)
        x = pow(s, (q + 1) // 2, p)
        while t != 1:
            # find least i with t^(2^i) = 1
            i = 0
            t2 = t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m = i
            c = b * b % p
            t = t * c % p
            x = x * b % p
    return sorted({x, p - x})


def _lift_unit_root(x: int, u: int, p: int, e: int) -> int:
    """Hensel-lift x with x*x = u (mod p) to a root mod p**e; p odd, p∤u."""
    pk = p
    while pk < p**e:
        pk_next = min(pk * pk, p**e)
        # correction c solves 2*x*c = (u - x*x)/pk (mod pk_next/pk)
        diff = (u - x * x) // pk
        c = diff * pow(2 * x, -1, pk_next) % pk_next
        x = (x + c * pk) % pk_next
        pk = pk_next
    return x % p**e


@lru_cache(maxsize=1 << 20)
def _roots_mod_prime_power(s: int, p: int, e: int) -> tuple[int, ...]:
    """Sorted tuple of all roots of x*x = s (mod p**e); p odd prime."""
    q = p**e
    s %= q
    if e == 1:
        return tuple(_tonelli_prime(s, p))
    if s == 0:
        # x must be divisible by p**ceil(e/2)
        step = p ** ((e + 1) // 2)
        return tuple(range(0, q, step))
    # split off the exact power of p in s
    t = 0
    u = s
    while u % p == 0:
        u //= p
        t += 1
    if t % 2 == 1:
        return ()
    if jacobi(u % p, p) != 1:
        return ()
    # x = p**(t/2) * w with w*w = u (mod p**(e-t)); w is defined mod
    # p**(e-t), and each lift w + m*p**(e-t) gives a distinct residue.
    half = t // 2
    w0 = _tonelli_prime(u, p)[0]
    w0 = _lift_unit_root(w0, u, p, e - t)
    mod_w = p ** (e - t)
    roots = []
    for w in (w0, mod_w - w0):
        for mlift in range(p**half):
            roots.append(p**half * (w + mlift * mod_w) % q)
    return tuple(sorted(set(roots)))


def sqrt_mod_prime(s: int, p: int) -> SquareRootSet:
    """Complete root set of x*x = s (mod p) for an odd prime p."""
    if p < 3 or p % 2 == 0:
        raise ValueError(f"need an odd prime, got {p}")
    pm = factorize(p)
    if pm.factors != ((p, 1),):
        raise ValueError(f"{p} is not prime")
    roots = _tonelli_prime(s, p)
    return SquareRootSet(s % p, pm, tuple(ResidueClass(k, p) for k in roots))


def sqrt_mod_prime_power(s: int, p: int, e: int) -> SquareRootSet:
    """Complete root set of x*x = s (mod p**e) for odd prime p, e >= 1."""
    if p < 3 or p % 2 == 0 or not is_odd_prime(p):
        raise ValueError(f"need an odd prime, got {p}")
    if e < 1:
        raise ValueError("exponent must be >= 1")
    q = p**e
    roots = _roots_mod_prime_power(s % q, p, e)
    mod = FactoredModulus(q, ((p, e),), s0=q if e == 1 else 1, s1=1 if e == 1 else q)
    return SquareRootSet(s % q, mod, tuple(ResidueClass(k, q) for k in roots))


def is_odd_prime(p: int) -> bool:
    from .arith import is_prime

    return p % 2 == 1 and is_prime(p)


def sqrt_mod(s: int, r) -> SquareRootSet:
    """Complete root set of x*x = s (mod r) for odd r, via CRT.

    ``r`` may be an int or a FactoredModulus.  The root count is the
    product of the per-prime-power counts; summed over all targets s
    mod r it totals exactly r.
    """
    rm = as_modulus(r)
    if not rm.is_odd:
        raise ValueError(f"modulus must be odd, got {rm.n}")
    n = rm.n
    s %= n
    if n == 1:
        return SquareRootSet(0, rm, (ResidueClass(0, 1),))
    per_prime: list[tuple[int, ...]] = []
    for p, e in rm.factors:
        roots = _roots_mod_prime_power(s % p**e, p, e)
        if not roots:
            return SquareRootSet(s, rm, ())
        per_prime.append(roots)
    # CRT basis: basis[i] = 1 mod p_i**e_i and = 0 mod the other factors
    basis = []
    for p, e in rm.factors:
        q = p**e
        cof = n // q
        basis.append(cof * pow(cof, -1, q) % n)
    combined = set()
    for combo in itertools.product(*per_prime):
        combined.add(sum(k * b for k, b in zip(combo, basis)) % n)
    return SquareRootSet(s, rm, tuple(ResidueClass(k, n) for k in sorted(combined)))
