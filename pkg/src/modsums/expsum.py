"""Complete mixed character/exponential sums over odd moduli.

The central object, for an odd modulus r2 and integer data
(g0, g4, l1, a, f4, f5, f6, f7, v) with gcd(j*g0*l1, r2) = 1, is

  E = sum_{n mod r2} (j*g0*l1*P(n) | r2)
        * e((-j*l1*a * inv(4*g0*P(n)) + v*n) / r2),

  P(n) = (f5*g4*l1 + f6*n) * (f7*g4*l1 - f4*n).

Terms where P(n) is not a unit mod r2 carry a zero Jacobi symbol and
drop out, which is exactly where the inverse would be undefined, so the
two conventions agree.

E is multiplicative: for any coprime split r2 = q1*q2,

  E(g0,g4,l1,a,f4,f5,f6,f7,v; q1*q2)
    = E(g0,g4,l1, a*inv(q2) mod q1, f4*q2, f5, f6*q2, f7, v; q1)
    * E(g0,g4,l1, a*inv(q1) mod q2, f4*q1, f5, f6*q1, f7, v; q2),

which reduces everything to prime powers p^m.  There the sum takes the
form S(chi, g, f, p^m) = sum_x chi(g(x)) e_{p^m}(f(x)) with chi the
Jacobi character mod p^m, g = j*g0*l1/F, f = -j*l1*a/(4*g0*qi*F) + v*x
and F(x) = (f5*g4*l1 + f6*qi*x) * (f7*g4*l1 - f4*qi*x), where qi is the
cofactor prime to p carried along by the splitting.

Stationary-phase analysis mod p^m (m >= 2).  With a primitive root w
mod p^2, w^(p-1) = 1 + rp, R = r mod p, and c = phi(p^m)/2 the exponent
of the quadratic character, the partial sums S_alpha over a fixed class
x = alpha (mod p) are controlled by the reduced derivative combination

  C(x) = p^(-t) * (R*g(x)*f'(x) + c*g'(x)),
  t = min(ord_p f', ord_p(c*g')).

Whenever t <= m-2, S_alpha vanishes exactly unless alpha is a critical
point, i.e. a unit-denominator zero mod p of the numerator of C.  For
the family above that numerator reduces mod p, up to a unit factor, to
the quartic

  Q(x) = j*l1*a1*F'(x) + 4*g0*qi*v1*F(x)^2,   a1 = a/p^t, v1 = v/p^t.

(The quartic comes from the v-part of R*g*f', which multiplies g, not
g'.)  At a critical alpha of multiplicity nu (the order of vanishing of
Q at alpha, computed by synthetic division so it is correct in small
characteristic), the partial sum obeys

  |S_alpha| <= min(nu, (5/4)**5) * p^((t + m*nu)/(nu+1)).

These facts require the structural relation f4*f5 + f6*f7 == 1 carried
by the divisor data that generates the family; it forces the quadratic
F to have discriminant (g4*l1*qi)^2 and content ord_p(F') = 0 whenever
ord_p(F) = 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Sequence

import numpy as np

from .arith import FactoredModulus, as_modulus, is_prime, jacobi
from .summation import KahanSum, csum

__all__ = [
    "ExpSumParams",
    "MultiplicativityResult",
    "CochraneContext",
    "BoundCheck",
    "LAMBDA",
    "esum_eval",
    "esum_multiplicativity_check",
    "esum_prime_power_product",
    "mixed_sum_eval",
    "mixed_sum_grid",
    "partial_sum_alpha",
    "partial_sums_by_class",
    "critical_points",
    "cochrane_alpha_bound",
    "esum_bound_check",
    "sample_structured_params",
]

LAMBDA = (5.0 / 4.0) ** 5
_VECTOR_LIMIT = 1 << 31
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ExpSumParams:
    """Integer data for the complete sum E over ``modulus``.

    ``j`` is the unit twist multiplying the argument of the character
    and the numerator of the inverted phase.  Only the coprimality
    constraints are enforced here; the stationary-phase machinery
    additionally needs the structural relation (see ``is_structured``).
    """

    g0: int
    g4: int
    l1: int
    a: int
    f4: int
    f5: int
    f6: int
    f7: int
    v: int
    modulus: FactoredModulus
    j: int = 1

    def __post_init__(self) -> None:
        n = self.modulus.n
        if n % 2 == 0:
            raise ValueError(f"modulus must be odd, got {n}")
        for name in ("g0", "l1", "j"):
            x = getattr(self, name)
            if math.gcd(x, n) != 1:
                raise ValueError(f"{name}={x} must be coprime to the modulus {n}")
        if self.g0 < 1 or self.g4 < 1 or self.f4 < 1 or self.f6 < 1:
            raise ValueError("g0, g4, f4, f6 must be positive")

    @property
    def is_structured(self) -> bool:
        """True when f4*f5 + f6*f7 == 1 (divisor-data shape)."""
        return self.f4 * self.f5 + self.f6 * self.f7 == 1


@dataclass(frozen=True)
class MultiplicativityResult:
    lhs: complex
    rhs: complex
    deviation: float


@dataclass(frozen=True)
class BoundCheck:
    measured: float
    bound: float
    ratio: float


@dataclass(frozen=True)
class CochraneContext:
    """Stationary-phase data for one prime power p^m.

    ``critical_points`` holds (alpha, multiplicity) pairs and is empty
    when t > m-2 (where the classification gives no information).
    ``t_prime`` is min(ord_p(a), ord_p(v)), None meaning +infinity.
    """

    p: int
    m: int
    primitive_root: int
    r_resid: int
    R_mod_p: int
    c: int
    t: int
    t_prime: int | None
    critical_points: tuple[tuple[int, int], ...]

    @property
    def applicable(self) -> bool:
        """True when the vanishing/bound classification is in force."""
        return self.t <= self.m - 2

    @property
    def trivial_branch(self) -> bool:
        """True when a and v both vanish to order >= m (only the
        trivial estimate is available there)."""
        return self.t_prime is None or self.t_prime >= self.m


def _vp(x: int, p: int) -> int | None:
    """p-adic valuation; None encodes +infinity (x == 0)."""
    if x == 0:
        return None
    t = 0
    while x % p == 0:
        x //= p
        t += 1
    return t


def _f_coeffs(params: ExpSumParams, qi: int) -> tuple[int, int, int]:
    """F(x) = A + B*x - C*x^2 for the prime-power form with cofactor qi."""
    g4l1 = params.g4 * params.l1
    A = params.f5 * params.f7 * g4l1 * g4l1
    B = g4l1 * qi * (params.f6 * params.f7 - params.f4 * params.f5)
    C = qi * qi * params.f4 * params.f6
    return A, B, C


@lru_cache(maxsize=512)
def _qr_table(p: int) -> np.ndarray:
    """(x | p) for x in [0, p) as an int8 array."""
    tab = np.full(p, -1, dtype=np.int8)
    tab[0] = 0
    sq = (np.arange(1, p, dtype=np.int64) ** 2) % p
    tab[sq] = 1
    return tab


@lru_cache(maxsize=256)
def _inv_table(pm: int) -> np.ndarray:
    """Inverse table mod pm; zero at non-units."""
    tab = np.zeros(pm, dtype=np.int64)
    for x in range(1, pm):
        if math.gcd(x, pm) == 1:
            tab[x] = pow(x, -1, pm)
    return tab


@lru_cache(maxsize=256)
def _phase_table(pm: int) -> np.ndarray:
    return np.exp((_TWO_PI * 1j / pm) * np.arange(pm))


def _jacobi_vector(x: np.ndarray, factors: Sequence[tuple[int, int]]) -> np.ndarray:
    """(x | n) for an int64 array of residues, n = prod p^e odd."""
    sym = np.ones(x.shape, dtype=np.int8)
    for p, e in factors:
        t = _qr_table(p)[x % p]
        if e % 2 == 1:
            sym *= t
        else:
            sym *= np.abs(t)
    return sym


def _modexp_vector(base: np.ndarray, exp: int, mod: int) -> np.ndarray:
    out = np.ones_like(base)
    b = base % mod
    while exp:
        if exp & 1:
            out = out * b % mod
        b = b * b % mod
        exp >>= 1
    return out


def _esum_eval_scalar(params: ExpSumParams) -> complex:
    n = params.modulus.n
    g0, g4, l1 = params.g0, params.g4, params.l1
    f4, f5, f6, f7 = params.f4, params.f5, params.f6, params.f7
    a, v, j = params.a, params.v, params.j
    jg = (j * g0 * l1) % n
    acc = KahanSum()
    for x in range(n):
        P = (f5 * g4 * l1 + f6 * x) * (f7 * g4 * l1 - f4 * x) % n
        sym = jacobi(jg * P % n, n)
        if sym == 0:
            continue
        num = (-j * l1 * a * pow(4 * g0 * P, -1, n) + v * x) % n
        acc.add(sym * cmath.exp(_TWO_PI * 1j * num / n))
    return acc.value


@lru_cache(maxsize=8)
def esum_eval(params: ExpSumParams) -> complex:
    """The complete sum E over [0, modulus); exact phases, compensated.

    Moduli up to 2**31 run through a vectorized path (unit inverses by
    a power of Euler's exponent, all residue arithmetic in int64); the
    final reduction is an exactly rounded component-wise sum.  The
    small memo lets identity checks revisit the same parameters (one
    direct value against several factorizations) without re-summing.
    """
    n = params.modulus.n
    if n == 1:
        return 1 + 0j
    if n > _VECTOR_LIMIT or n < 3:
        return _esum_eval_scalar(params)
    g0, g4, l1 = params.g0, params.g4, params.l1
    f4, f5, f6, f7 = params.f4, params.f5, params.f6, params.f7
    a, v, j = params.a, params.v, params.j
    x = np.arange(n, dtype=np.int64)
    u = ((f5 * g4 * l1) % n + (f6 % n) * x) % n
    w = ((f7 * g4 * l1) % n - (f4 % n) * x) % n
    P = u * w % n
    sym = jacobi(j * g0 * l1 % n, n) * _jacobi_vector(P, params.modulus.factors)
    mask = sym != 0
    Pm = P[mask]
    W = (4 * g0 % n) * Pm % n
    Winv = _modexp_vector(W, params.modulus.phi() - 1, n)
    num = ((-j * l1 * a) % n * Winv + (v % n) * x[mask]) % n
    terms = sym[mask] * np.exp((_TWO_PI * 1j / n) * num)
    return csum(terms)


def esum_multiplicativity_check(
    params: ExpSumParams, q1: int, q2: int
) -> MultiplicativityResult:
    """Compare E at q1*q2 with the product of the twisted factors.

    q1*q2 must equal the modulus and gcd(q1, q2) must be 1.  Returns
    the direct value, the product, and |lhs - rhs|.
    """
    n = params.modulus.n
    if q1 * q2 != n or q1 < 1 or q2 < 1:
        raise ValueError(f"need q1*q2 == {n}")
    if math.gcd(q1, q2) != 1:
        raise ValueError(f"split {q1} x {q2} is not coprime")
    lhs = esum_eval(params)
    rhs = _twisted_factor(params, q1, q2) * _twisted_factor(params, q2, q1)
    return MultiplicativityResult(lhs, rhs, abs(lhs - rhs))


def _twisted_factor(params: ExpSumParams, q: int, cof: int) -> complex:
    """E at modulus q with (a, f4, f6) twisted by the cofactor cof."""
    if q == 1:
        return 1 + 0j
    sub = replace(
        params,
        a=params.a * pow(cof, -1, q) % q,
        f4=params.f4 * cof,
        f6=params.f6 * cof,
        modulus=as_modulus(q),
    )
    return esum_eval(sub)


def esum_prime_power_product(params: ExpSumParams) -> complex:
    """E reassembled as the product of its prime-power factors."""
    n = params.modulus.n
    if n == 1:
        return 1 + 0j
    out = 1 + 0j
    for p, e in params.modulus.factors:
        q = p**e
        out *= _twisted_factor(params, q, n // q)
    return out


def _prime_power_tables(p: int, m: int):
    pm = p**m
    return pm, _qr_table(p), _inv_table(pm), _phase_table(pm)


def _check_prime(p: int) -> None:
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"need an odd prime, got {p}")


def _sym_unit(y: int, p: int, m: int) -> int:
    """(y | p^m) for y a unit mod p."""
    return jacobi(y % p, p) if m % 2 == 1 else 1


def mixed_sum_eval(p: int, m: int, params: ExpSumParams, qi: int = 1) -> complex:
    """S(chi, g, f, p^m) for the prime-power form with cofactor qi.

    Sums x over a full period; classes where F(x) is not a unit are
    skipped (character zero and undefined inverse coincide there).
    With qi = 1 and modulus p^m this equals esum_eval.
    """
    _check_prime(p)
    if m < 1:
        raise ValueError("m must be >= 1")
    if math.gcd(qi, p) != 1:
        raise ValueError("cofactor qi must be prime to p")
    pm, qr, inv, ph = _prime_power_tables(p, m)
    A, B, C = (x % pm for x in _f_coeffs(params, qi))
    jg = _sym_unit(params.j * params.g0 * params.l1, p, m)
    u4 = 4 * params.g0 * qi % pm
    na = (-params.j * params.l1 * params.a) % pm
    vv = params.v % pm
    acc = KahanSum()
    for x in range(pm):
        F = (A + B * x - C * x * x) % pm
        if F % p == 0:
            continue
        s = jg * (int(qr[F % p]) if m % 2 == 1 else 1)
        num = (na * int(inv[u4 * F % pm]) + vv * x) % pm
        acc.add(s * complex(ph[num]))
    return acc.value


def partial_sum_alpha(
    p: int, m: int, params: ExpSumParams, alpha: int, qi: int = 1
) -> complex:
    """The part of mixed_sum_eval taken over x = alpha (mod p)."""
    _check_prime(p)
    if math.gcd(qi, p) != 1:
        raise ValueError("cofactor qi must be prime to p")
    pm, qr, inv, ph = _prime_power_tables(p, m)
    A, B, C = (x % pm for x in _f_coeffs(params, qi))
    jg = _sym_unit(params.j * params.g0 * params.l1, p, m)
    u4 = 4 * params.g0 * qi % pm
    na = (-params.j * params.l1 * params.a) % pm
    vv = params.v % pm
    acc = KahanSum()
    for x in range(alpha % p, pm, p):
        F = (A + B * x - C * x * x) % pm
        if F % p == 0:
            continue
        s = jg * (int(qr[F % p]) if m % 2 == 1 else 1)
        num = (na * int(inv[u4 * F % pm]) + vv * x) % pm
        acc.add(s * complex(ph[num]))
    return acc.value


def partial_sums_by_class(
    p: int, m: int, params: ExpSumParams, qi: int = 1
) -> np.ndarray:
    """All p partial sums S_alpha at once (vectorized single pass).

    Index alpha = x mod p; the values sum to mixed_sum_eval exactly up
    to float rounding.
    """
    _check_prime(p)
    if math.gcd(qi, p) != 1:
        raise ValueError("cofactor qi must be prime to p")
    pm, qr, inv, ph = _prime_power_tables(p, m)
    A, B, C = (x % pm for x in _f_coeffs(params, qi))
    jg = _sym_unit(params.j * params.g0 * params.l1, p, m)
    u4 = 4 * params.g0 * qi % pm
    na = (-params.j * params.l1 * params.a) % pm
    vv = params.v % pm
    x = np.arange(pm, dtype=np.int64)
    F = (A + B * x - C * x * x) % pm
    mask = F % p != 0
    xm = x[mask]
    Fm = F[mask]
    sym = jg * (qr[Fm % p].astype(np.int64) if m % 2 == 1 else 1)
    num = (na * inv[u4 * Fm % pm] + vv * xm) % pm
    terms = sym * ph[num]
    alpha = xm % p
    re = np.bincount(alpha, weights=terms.real, minlength=p)
    im = np.bincount(alpha, weights=terms.imag, minlength=p)
    return re + 1j * im


def mixed_sum_grid(p: int, params: ExpSumParams, qi: int = 1) -> np.ndarray:
    """All prime-modulus sums S for (a, v) in [0, p) x [0, p).

    m = 1 only.  For fixed a the map v -> S(a, v) is an inverse DFT of
    length p, so the whole grid costs p^2 log p.  Entry [a, v] equals
    mixed_sum_eval(p, 1, replace(params, a=a, v=v), qi) up to rounding.
    """
    _check_prime(p)
    if math.gcd(qi, p) != 1:
        raise ValueError("cofactor qi must be prime to p")
    pm, qr, inv, ph = _prime_power_tables(p, 1)
    A, B, C = (x % p for x in _f_coeffs(params, qi))
    jg = _sym_unit(params.j * params.g0 * params.l1, p, 1)
    x = np.arange(p, dtype=np.int64)
    F = (A + B * x - C * x * x) % p
    mask = F != 0
    sym = np.where(mask, jg * qr[F].astype(np.int64), 0)
    # phase base w(x) = -j*l1 * inv(4*g0*qi*F(x)); the a-dependence of
    # each term is e(a*w(x)/p) and the v-dependence e(v*x/p)
    w = (-params.j * params.l1) % p * inv[(4 * params.g0 * qi) % p * F % p] % p
    rows = sym[None, :] * ph[np.outer(np.arange(p, dtype=np.int64), w) % p]
    return np.fft.ifft(rows, axis=1) * p


def _poly_content_val(coeffs: Sequence[int], p: int) -> int | None:
    vals = [_vp(c, p) for c in coeffs]
    vals = [v for v in vals if v is not None]
    return min(vals) if vals else None


def _least_primitive_root(p: int) -> int:
    phi = p - 1
    prime_divs = [q for q, _ in as_modulus(phi).factors]
    g = 2
    while True:
        if all(pow(g, phi // q, p) != 1 for q in prime_divs):
            return g
        g += 1


@lru_cache(maxsize=512)
def _primitive_root_mod_p2(p: int) -> int:
    """Least primitive root mod p, lifted so it also generates mod p^2."""
    g = _least_primitive_root(p)
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g


def _verify_root_mod_p2(g: int, p: int) -> bool:
    order = p * (p - 1)
    prime_divs = [q for q, _ in as_modulus(order).factors]
    return math.gcd(g, p) == 1 and all(
        pow(g, order // q, p * p) != 1 for q in prime_divs
    )


def _divide_linear(coeffs: list[int], alpha: int, p: int) -> tuple[list[int], int]:
    """Synthetic division by (x - alpha) mod p: (quotient, remainder)."""
    quot = [0] * (len(coeffs) - 1)
    acc = 0
    for i in range(len(coeffs) - 1, 0, -1):
        acc = (acc * alpha + coeffs[i]) % p
        quot[i - 1] = acc
    rem = (acc * alpha + coeffs[0]) % p
    return quot, rem


def _vanish_order(coeffs: Sequence[int], alpha: int, p: int) -> int:
    """Largest k with (x - alpha)^k dividing the polynomial mod p.

    Synthetic division rather than iterated derivatives: the factorial
    factors in formal derivatives vanish in small characteristic and
    would under-detect high-order roots for p = 3.
    """
    c = [x % p for x in coeffs]
    nu = 0
    while any(c):
        c, rem = _divide_linear(c, alpha, p)
        if rem != 0:
            break
        nu += 1
        if not c:
            break
    return nu


def critical_points(
    p: int,
    m: int,
    params: ExpSumParams,
    qi: int = 1,
    primitive_root: int | None = None,
) -> CochraneContext:
    """Stationary-phase context for the prime-power sum at p^m.

    Requires the structural relation f4*f5 + f6*f7 == 1 and content
    ord_p(F) = 0 (otherwise every term of the sum is skipped and the
    classification is vacuous; that case raises).  The critical set and
    the multiplicities do not depend on which primitive root is chosen;
    passing ``primitive_root`` explicitly exists to let tests check
    that invariance.
    """
    _check_prime(p)
    if m < 2:
        raise ValueError("stationary phase needs m >= 2")
    if math.gcd(qi, p) != 1:
        raise ValueError("cofactor qi must be prime to p")
    if not params.is_structured:
        raise ValueError(
            "critical point classification needs f4*f5 + f6*f7 == 1"
        )
    A, B, C = _f_coeffs(params, qi)
    if _poly_content_val((A, B, C), p) != 0:
        raise ValueError("F vanishes mod p identically; the sum is empty")
    if _poly_content_val((B, -2 * C), p) != 0:
        raise AssertionError("structured data cannot give ord_p(F') > 0")

    if primitive_root is None:
        root = _primitive_root_mod_p2(p)
    else:
        root = primitive_root
        if not _verify_root_mod_p2(root, p):
            raise ValueError(f"{root} does not generate the units mod {p}^2")
    r_resid = (pow(root, p - 1, p * p) - 1) // p % p
    c = (p - 1) // 2 * p ** (m - 1)

    j, l1, g0, a, v = params.j, params.l1, params.g0, params.a, params.v
    # t from the numerator of f' = (j*l1*a*F' + 4*g0*qi*v*F^2) / (4*g0*qi*F^2)
    F2 = (A * A, 2 * A * B, B * B - 2 * A * C, -2 * B * C, C * C)
    u = 4 * g0 * qi
    nf = (
        j * l1 * a * B + u * v * F2[0],
        -2 * j * l1 * a * C + u * v * F2[1],
        u * v * F2[2],
        u * v * F2[3],
        u * v * F2[4],
    )
    tf = _poly_content_val(nf, p)
    t = m - 1 if tf is None else min(tf, m - 1)
    tp_vals = [x for x in (_vp(a, p), _vp(v, p)) if x is not None]
    t_prime = min(tp_vals) if tp_vals else None

    crit: list[tuple[int, int]] = []
    if t <= m - 2:
        a1 = a // p**t
        v1 = v // p**t
        quartic = [
            j * l1 * a1 * B + u * v1 * F2[0],
            -2 * j * l1 * a1 * C + u * v1 * F2[1],
            u * v1 * F2[2],
            u * v1 * F2[3],
            u * v1 * F2[4],
        ]
        for alpha in range(p):
            if (A + B * alpha - C * alpha * alpha) % p == 0:
                continue
            nu = _vanish_order(quartic, alpha, p)
            if nu > 0:
                crit.append((alpha, nu))
    return CochraneContext(
        p=p,
        m=m,
        primitive_root=root,
        r_resid=r_resid,
        R_mod_p=r_resid % p,
        c=c,
        t=t,
        t_prime=t_prime,
        critical_points=tuple(crit),
    )


def cochrane_alpha_bound(ctx: CochraneContext, nu: int) -> float:
    """|S_alpha| bound at a critical point of multiplicity nu."""
    if not ctx.applicable:
        raise ValueError("bound requires t <= m - 2")
    lam = min(float(nu), LAMBDA)
    return lam * ctx.p ** ((ctx.t + ctx.m * nu) / (nu + 1))


def esum_bound_check(params: ExpSumParams) -> BoundCheck:
    """measured |E| against the squarefree/squarefull envelope.

    bound = g4^(1/2) * r3^(1/2) * gcd(a, v, r4)^(1/4) * r4^(3/4) with
    r3, r4 the squarefree and squarefull parts of the modulus.  The
    implied constant (divisor-bounded, r2^eps) lives in the reported
    ratio; nothing here asserts.
    """
    measured = abs(esum_eval(params))
    r3, r4 = params.modulus.s0, params.modulus.s1
    g = math.gcd(math.gcd(params.a, params.v), r4)
    bound = math.sqrt(params.g4) * math.sqrt(r3) * g**0.25 * r4**0.75
    return BoundCheck(measured, bound, measured / bound)


def sample_structured_params(
    rng,
    modulus,
    *,
    j_values: Sequence[int] | None = None,
    small: int = 6,
    shift: int = 3,
) -> ExpSumParams:
    """Draw divisor-data shaped parameters over ``modulus``.

    f4, f6 are small positive coprime integers, f5 inverts f4 mod f6
    (with a random lift), f7 completes f4*f5 + f6*f7 = 1; g0, l1, j are
    random units, g4 a small positive integer, a and v random residues.
    """
    rm = as_modulus(modulus)
    n = rm.n

    def unit() -> int:
        while True:
            x = rng.randint(1, max(1, n - 1)) if n > 1 else 1
            if math.gcd(x, n) == 1:
                return x

    while True:
        f6 = rng.randint(1, small)
        f4 = rng.randint(1, small)
        if math.gcd(f4, f6) == 1:
            break
    f5 = pow(f4, -1, f6) + f6 * rng.randint(0, shift) if f6 > 1 else rng.randint(-shift, shift)
    f7 = (1 - f4 * f5) // f6
    j = rng.choice(list(j_values)) if j_values else unit()
    return ExpSumParams(
        g0=unit(),
        g4=rng.randint(1, 4 * small),
        l1=unit(),
        a=rng.randrange(max(n, 2)),
        f4=f4,
        f5=f5,
        f6=f6,
        f7=f7,
        v=rng.randrange(max(n, 2)),
        modulus=rm,
        j=j,
    )
