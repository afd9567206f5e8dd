"""Farey counting near rational points and large-sieve quadratic forms.

The counter P(alpha) is the number of coprime pairs (q, a) with
1 <= q <= Q and |a/q^2 - alpha| <= Delta.  All interval comparisons
run on exact rationals: a boundary fraction such as 6/25 at distance
exactly Delta from alpha must be counted, and floating-point rounding
would mis-classify it.  Floats passed in are converted to the dyadic
rational they exactly represent.

The quadratic forms are

  sum_{q <= Q} sum_{a mod q^2, (a,q)=1} |sum_n c_n e(n a / q^2)|^2

over square moduli, and the same shape over generic moduli q <= Q for
the classical inequality, whose constant (N + Q^2 - 1) is sharp with
constant exactly 1 and is asserted as such.

The parameter pipeline reproduces the balanced choices
delta = Q^(5/4+gamma/2+eps) r^(1/2), L = Q^(1+eps) r / delta,
M = C1 Q^(1/2-gamma), F = C2 Q^(1/2+gamma)/r, H = 1/(LF), together
with validity flags for the windows 1 <= L, M <= r, 1 <= H <= M,
r <= Q^(3/2-gamma-2eps), and Q^(1/2+gamma+eps) <= r <= Q^(1-2eps)
with gamma <= 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .arith import FactoredModulus, as_modulus
from .summation import csum

__all__ = [
    "FareyQuery",
    "LsInstance",
    "LsParams",
    "LsBounds",
    "RelationCheck",
    "OversizeError",
    "OPS_GUARD",
    "farey_count",
    "z_breakpoints",
    "z_range",
    "ls_quadform_square_moduli",
    "ls_quadform_classical",
    "ls_bound_eval",
    "ls_relation_check",
    "params_pipeline",
    "thm3_bound",
    "lemma41_bound",
]

OPS_GUARD = 10**9
_TWO_PI = 2.0 * math.pi


class OversizeError(ValueError):
    """Instance refused because the operation estimate exceeds OPS_GUARD.

    Subclasses ValueError so existing callers keep working, but lets
    front ends report resource refusals separately from bad inputs.
    """


def _to_frac(x) -> Fraction:
    """Exact rational from int, Fraction, float, or decimal string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


@dataclass(frozen=True)
class FareyQuery:
    """Target for the coprime-pair counter.

    Either ``alpha`` is given directly, or the structural triple
    (b, r, z) encodes alpha = b/r + z, in which case gcd(b, r) = 1 and
    Delta <= z <= sqrt(Delta)/r are enforced (the latter exactly, as
    (z r)^2 <= Delta).
    """

    Q: int
    delta: Fraction
    alpha: Fraction | None = None
    b: int | None = None
    r: FactoredModulus | None = None
    z: Fraction | None = None

    def __post_init__(self) -> None:
        if self.Q < 1:
            raise ValueError("Q must be >= 1")
        object.__setattr__(self, "delta", _to_frac(self.delta))
        if self.delta <= 0:
            raise ValueError("Delta must be positive")
        structural = self.b is not None or self.r is not None or self.z is not None
        if structural:
            if self.alpha is not None:
                raise ValueError("give either alpha or (b, r, z), not both")
            if self.b is None or self.r is None or self.z is None:
                raise ValueError("structural form needs all of b, r, z")
            object.__setattr__(self, "r", as_modulus(self.r))
            object.__setattr__(self, "z", _to_frac(self.z))
            n = self.r.n
            if math.gcd(self.b, n) != 1:
                raise ValueError(f"gcd(b, r) must be 1, got b={self.b} r={n}")
            if self.z < self.delta or (self.z * n) ** 2 > self.delta:
                raise ValueError(
                    f"z={self.z} outside [Delta, sqrt(Delta)/r] for r={n}"
                )
        else:
            if self.alpha is None:
                raise ValueError("need alpha or the structural (b, r, z)")
            object.__setattr__(self, "alpha", _to_frac(self.alpha))

    @property
    def target(self) -> Fraction:
        if self.alpha is not None:
            return self.alpha
        return Fraction(self.b, self.r.n) + self.z

    @property
    def thm3_compatible(self) -> bool:
        """True when structural with gcd(2b, r) = 1."""
        return self.r is not None and math.gcd(2 * self.b, self.r.n) == 1


def _farey_guard(Q: int, delta: Fraction) -> None:
    est = 2.0 * float(delta) * Q**3 / 3.0 + Q
    if est > OPS_GUARD:
        raise OversizeError(
            f"about {est:.2e} candidate pairs; shrink Q or Delta below the"
            f" {OPS_GUARD:.0e} guard"
        )


def farey_count(query: FareyQuery) -> int:
    """P(alpha): coprime (q, a) with |a/q^2 - alpha| <= Delta, q <= Q."""
    alpha, delta = query.target, query.delta
    _farey_guard(query.Q, delta)
    count = 0
    for q in range(1, query.Q + 1):
        q2 = q * q
        lo = math.ceil(q2 * (alpha - delta))
        hi = math.floor(q2 * (alpha + delta))
        for a in range(lo, hi + 1):
            if math.gcd(a, q) == 1:
                count += 1
    return count


def z_range(delta, r) -> tuple[Fraction, Fraction]:
    """Exact-rational endpoints of Delta <= z <= sqrt(Delta)/r.

    The upper endpoint is the nearest representable value from below,
    since sqrt(Delta) is usually irrational; the returned zmax
    satisfies (zmax r)^2 <= Delta exactly.
    """
    delta = _to_frac(delta)
    n = as_modulus(r).n if not isinstance(r, int) else r
    if delta > Fraction(1, n * n):
        raise ValueError(f"empty window: need Delta <= 1/r^2, got r={n}")
    z = Fraction(math.sqrt(float(delta)) / n)
    while (z * n) ** 2 > delta:
        z = Fraction(math.nextafter(float(z), 0.0))
    if z < delta:
        z = delta
    return delta, z


def z_breakpoints(
    Q: int, b: int, r, delta, zmin=None, zmax=None
) -> list[Fraction]:
    """All z in [zmin, zmax] where P(b/r + z) can change, plus endpoints.

    P is piecewise constant in z; a fraction a/q^2 enters or leaves the
    window exactly at z = a/q^2 - b/r -+ Delta, so evaluating P on this
    grid finds its true maximum over the interval.
    """
    n = as_modulus(r).n if not isinstance(r, int) else r
    delta = _to_frac(delta)
    if zmin is None or zmax is None:
        lo, hi = z_range(delta, n)
        zmin = lo if zmin is None else _to_frac(zmin)
        zmax = hi if zmax is None else _to_frac(zmax)
    else:
        zmin, zmax = _to_frac(zmin), _to_frac(zmax)
    if zmin > zmax:
        raise ValueError(f"zmin={zmin} > zmax={zmax}")
    base = Fraction(b, n)
    est = 2.0 * Q**3 / 3.0 * float(zmax - zmin + 2 * delta) + 2 * Q
    if est > OPS_GUARD:
        raise OversizeError(f"about {est:.2e} breakpoints; shrink Q or the z window")
    out = {zmin, zmax}
    for q in range(1, Q + 1):
        q2 = q * q
        lo = math.ceil(q2 * (base + zmin - delta))
        hi = math.floor(q2 * (base + zmax + delta))
        for a in range(lo, hi + 1):
            if math.gcd(a, q) != 1:
                continue
            center = Fraction(a, q2) - base
            for zc in (center - delta, center + delta):
                if zmin <= zc <= zmax:
                    out.add(zc)
    return sorted(out)


@dataclass(frozen=True)
class LsInstance:
    """Coefficients c_n on M_offset < n <= M_offset + N."""

    Q: int
    N: int
    M_offset: int
    coeffs: tuple[complex, ...]

    def __post_init__(self) -> None:
        if self.Q < 1 or self.N < 1:
            raise ValueError("Q and N must be >= 1")
        if len(self.coeffs) != self.N:
            raise ValueError(f"need N = {self.N} coefficients, got {len(self.coeffs)}")

    @property
    def Z(self) -> float:
        return math.fsum(abs(c) ** 2 for c in self.coeffs)


def _quadform(inst: LsInstance, square: bool) -> float:
    Q, N = inst.Q, inst.N
    mods = [q * q if square else q for q in range(1, Q + 1)]
    ops = N * sum(mods)
    if ops > OPS_GUARD:
        raise OversizeError(
            f"about {ops:.2e} inner operations; shrink Q or N below the"
            f" {OPS_GUARD:.0e} guard"
        )
    ns = np.arange(inst.M_offset + 1, inst.M_offset + N + 1, dtype=np.int64)
    coeffs = np.array(inst.coeffs, dtype=complex)
    per_q = []
    for q, mod in zip(range(1, Q + 1), mods):
        a_vals = np.array([a for a in range(1, mod + 1) if math.gcd(a, q) == 1])
        inner = np.exp((_TWO_PI * 1j / mod) * np.outer(a_vals, ns % mod)) @ coeffs
        per_q.append(math.fsum(np.abs(inner) ** 2))
    return math.fsum(per_q)


def ls_quadform_square_moduli(inst: LsInstance) -> float:
    """The quadratic form over denominators q^2, q <= Q."""
    return _quadform(inst, square=True)


def ls_quadform_classical(inst: LsInstance) -> float:
    """The same form over generic moduli q <= Q (classical shape)."""
    return _quadform(inst, square=False)


@dataclass(frozen=True)
class LsBounds:
    original: float
    refined: float
    conjectured: float


def ls_bound_eval(Q: int, N: int) -> LsBounds:
    """Per-unit-Z bound shapes for the square-moduli form.

    original    = Q^3 + Q^2 sqrt(N) + sqrt(Q) N
    refined     = Q^3 + N + min(Q^2 sqrt(N), sqrt(Q) N)
    conjectured = Q^3 + N
    """
    if Q < 1 or N < 1:
        raise ValueError("Q and N must be >= 1")
    q3 = float(Q) ** 3
    t1 = Q**2 * math.sqrt(N)
    t2 = math.sqrt(Q) * N
    return LsBounds(q3 + t1 + t2, q3 + N + min(t1, t2), q3 + N)


@dataclass(frozen=True)
class RelationCheck:
    lhs: float
    rhs_max_P: int


def ls_relation_check(inst: LsInstance) -> RelationCheck:
    """The form against the max of P over the structural (b, r, z) grid.

    Delta = 1/N; r runs to sqrt(N), b over reduced residues, z over the
    breakpoint grid of the window [Delta, sqrt(Delta)/r].  The quotient
    lhs / (Z * rhs_max_P) is the sweep statistic; nothing is asserted
    here.
    """
    lhs = _quadform(inst, square=True)
    delta = Fraction(1, inst.N)
    rmax = math.isqrt(inst.N)
    grid_est = sum(
        (2.0 * inst.Q**3 / 3.0 * float(2 * delta) + 2 * inst.Q + 2)
        * max(1, r - 1)
        for r in range(1, rmax + 1)
    )
    if grid_est * (2.0 * float(delta) * inst.Q**3 / 3.0 + inst.Q) > OPS_GUARD:
        raise OversizeError("structural grid too large; shrink Q or N")
    best = 0
    for r in range(1, rmax + 1):
        zmin, zmax = z_range(delta, r)
        for b in range(1, r + 1):
            if math.gcd(b, r) != 1:
                continue
            for z in z_breakpoints(inst.Q, b, r, delta, zmin, zmax):
                q = FareyQuery(inst.Q, delta, b=b, r=as_modulus(r), z=z)
                best = max(best, farey_count(q))
    return RelationCheck(lhs, best)


@dataclass(frozen=True)
class LsParams:
    """Balanced pipeline values plus window validity flags."""

    Q: int
    r: int
    gamma: float
    eps: float
    z: float
    delta: float
    L: float
    M0: float
    M: float
    F: float
    H: float
    delta_ok: bool
    lmh_ok: bool
    rcond2_ok: bool
    rcond3_ok: bool

    @property
    def valid(self) -> bool:
        return self.lmh_ok and self.rcond2_ok and self.rcond3_ok


def params_pipeline(
    Q: int,
    r,
    gamma: float,
    *,
    eps: float = 0.05,
    c0: float = 0.5,
    c1: float = 2.0,
    c2: float = 1.0,
) -> LsParams:
    """Derive (delta, L, M0, M, F, H) from (Q, r, gamma) and flag windows.

    Out-of-window inputs are not an error; the flags say which of the
    conditions fail so sweeps can report the fallback branch.
    """
    if Q < 2:
        raise ValueError("Q must be >= 2")
    n = as_modulus(r).n if not isinstance(r, int) else r
    if n % 2 == 0:
        raise ValueError(f"r must be odd, got {n}")
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    delta = Q ** (1.25 + gamma / 2 + eps) * n**0.5
    L = Q ** (1 + eps) * n / delta
    M0 = c0 * Q ** (0.5 - gamma)
    M = c1 * Q ** (0.5 - gamma)
    F = c2 * Q ** (0.5 + gamma) / n
    H = 1.0 / (L * F)
    z = 1.0 / (Q ** (1.5 + gamma) * n)
    delta_ok = Q ** (0.5 + gamma) * n <= delta <= Q**2
    lmh_ok = 1 <= L <= n and 1 <= M <= n and 1 <= H <= M
    rcond2_ok = n <= Q ** (1.5 - gamma - 2 * eps)
    rcond3_ok = (
        Q ** (0.5 + gamma + eps) <= n <= Q ** (1 - 2 * eps) and gamma <= 0.5
    )
    return LsParams(
        Q=Q,
        r=n,
        gamma=gamma,
        eps=eps,
        z=z,
        delta=delta,
        L=L,
        M0=M0,
        M=M,
        F=F,
        H=H,
        delta_ok=delta_ok,
        lmh_ok=lmh_ok,
        rcond2_ok=rcond2_ok,
        rcond3_ok=rcond3_ok,
    )


def thm3_bound(Q: int, r) -> float:
    """Q^(5/8) r^(-1/4) + Q^(1/2) s0^(-1/4) + Q^(1/4) r^(1/4) s1^(1/8).

    s0 and s1 are the squarefree and squarefull parts of r.
    """
    rm = as_modulus(r)
    if rm.n % 2 == 0:
        raise ValueError(f"r must be odd, got {rm.n}")
    return (
        Q**0.625 * rm.n**-0.25
        + Q**0.5 * rm.s0**-0.25
        + Q**0.25 * rm.n**0.25 * rm.s1**0.125
    )


def lemma41_bound(Q: int, N: int, r: int, z: float, delta: float) -> float:
    """1 + Q^2 r z + Q^3 Delta."""
    if min(Q, N, r) < 1 or z < 0 or delta < 0:
        raise ValueError("inputs must be positive")
    return 1.0 + Q**2 * r * z + Q**3 * delta
