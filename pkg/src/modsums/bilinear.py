"""Bilinear sums over complete sets of modular square roots.

The sum evaluated here, for an odd modulus r, a unit twist j, ranges
L, M, weights alpha_l (|l| <= L) and beta_m (1 <= m <= M), and a real
phase function f, is

  Sigma = sum_{|l| <= L} sum_{1 <= m <= M} alpha_l * beta_m
            * [ sum_{k^2 = j*m mod r} e_r(l*k) ] * e(l*f(m)).

The inner bracket runs over the complete root collection; an empty
collection kills the (l, m) term.  Alongside the exact evaluator the
module provides the additive-energy counter

  A(d) = #{(m1, m2, k1, k2) : 1 <= m1, m2 <= M, |m1 - m2| <= H,
           k1^2 = j*m1, k2^2 = j*m2, k1 - k2 = d (mod r)}

and evaluators for the three bound shapes attached to Sigma (the
two-branch bound keyed to the squarefree/squarefull split s0*s1 of r,
the single-branch bound, and the trivial one), each reported per unit
of ||alpha||_2 * ||beta||_inf so measured-to-bound ratios absorb the
implied constants.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .arith import FactoredModulus, as_modulus
from .sqrtmod import sqrt_mod
from .summation import csum

__all__ = [
    "PhaseSpec",
    "BilinearInstance",
    "EnergyCount",
    "Thm2Bound",
    "sigma_eval",
    "energy_count",
    "energy_spectrum",
    "bound_thm1",
    "bound_thm2",
    "bound_trivial",
    "ones",
    "unit_phases",
    "read_coeffs",
    "write_coeffs",
]

_TWO_PI = 2.0 * math.pi


def _e1(z: np.ndarray) -> np.ndarray:
    # e(z) with the argument reduced to [-1/2, 1/2] first; for the
    # scaled-sqrt phase l*f(m) grows like L*sqrt(M) and reduction
    # keeps the sin/cos arguments small
    return np.exp(_TWO_PI * 1j * (z - np.round(z)))


@dataclass(frozen=True)
class PhaseSpec:
    """Phase function f on [1, M].

    kind "zero": f = 0.  kind "scaled-sqrt": f(x) = -amplitude*sqrt(x)
    with amplitude >= 0.  kind "table": f(m) = values[m-1], derivative
    bound supplied by the caller.
    """

    kind: str
    amplitude: float = 0.0
    values: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("zero", "scaled-sqrt", "table"):
            raise ValueError(f"unknown phase kind {self.kind!r}")
        if self.kind == "scaled-sqrt" and self.amplitude < 0:
            raise ValueError("amplitude must be >= 0")
        if self.kind == "table" and not self.values:
            raise ValueError("table phase needs values")

    @classmethod
    def zero(cls) -> "PhaseSpec":
        return cls("zero")

    @classmethod
    def scaled_sqrt(cls, amplitude: float) -> "PhaseSpec":
        return cls("scaled-sqrt", amplitude=float(amplitude))

    @classmethod
    def table(cls, values: Iterable[float]) -> "PhaseSpec":
        return cls("table", values=tuple(float(v) for v in values))

    def eval_array(self, m_count: int) -> np.ndarray:
        """f at m = 1..m_count."""
        if self.kind == "zero":
            return np.zeros(m_count)
        if self.kind == "scaled-sqrt":
            return -self.amplitude * np.sqrt(np.arange(1, m_count + 1))
        if m_count > len(self.values):
            raise ValueError(
                f"table holds {len(self.values)} values, need {m_count}"
            )
        return np.array(self.values[:m_count])

    def derivative_sup(self) -> float | None:
        """sup |f'| on [1, M]; None when only the caller knows it.

        For the scaled-sqrt phase |f'(x)| = amplitude/(2*sqrt(x)) is
        decreasing, so the sup sits at x = 1.
        """
        if self.kind == "zero":
            return 0.0
        if self.kind == "scaled-sqrt":
            return self.amplitude / 2.0
        return None


@dataclass(frozen=True)
class BilinearInstance:
    """Immutable data for one bilinear sum.

    alpha has length 2L+1 (index l = position - L), beta length M.
    F bounds |f'| on [1, M] and must not exceed 1/L, which keeps the
    window 1 <= H <= min(1/(LF), M) nonempty; F = 0 means the 1/(LF)
    cap is +infinity.
    """

    r: FactoredModulus
    j: int
    L: int
    M: int
    alpha: tuple[complex, ...]
    beta: tuple[complex, ...]
    phase: PhaseSpec
    F: float
    H: int

    def __post_init__(self) -> None:
        n = self.r.n
        if n % 2 == 0:
            raise ValueError(f"modulus must be odd, got {n}")
        if math.gcd(self.j, n) != 1:
            raise ValueError(f"j={self.j} must be coprime to {n}")
        if not (1 <= self.L <= n and 1 <= self.M <= n):
            raise ValueError(f"need 1 <= L, M <= r, got L={self.L} M={self.M} r={n}")
        if len(self.alpha) != 2 * self.L + 1:
            raise ValueError(f"alpha must have 2L+1 = {2*self.L+1} entries")
        if len(self.beta) != self.M:
            raise ValueError(f"beta must have M = {self.M} entries")
        if self.F < 0 or self.F * self.L > 1 + 1e-12:
            raise ValueError(f"need 0 <= F <= 1/L, got F={self.F} L={self.L}")
        sup = self.phase.derivative_sup()
        if sup is not None and self.F < sup - 1e-12:
            raise ValueError(f"F={self.F} below the derivative sup {sup}")
        cap = self.M if self.F == 0 else min(1.0 / (self.L * self.F), self.M)
        if not (1 <= self.H <= cap + 1e-9):
            raise ValueError(f"H={self.H} outside [1, min(1/(LF), M)] = [1, {cap}]")

    @property
    def alpha_norm2(self) -> float:
        return math.sqrt(math.fsum(abs(a) ** 2 for a in self.alpha))

    @property
    def beta_norm_inf(self) -> float:
        return max(abs(b) for b in self.beta)


@dataclass(frozen=True)
class EnergyCount:
    d: int
    count: int

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ValueError("count must be >= 0")


@dataclass(frozen=True)
class Thm2Bound:
    first: float
    second: float
    min: float


def _root_arrays(r: int, j: int, m_count: int) -> list[np.ndarray]:
    rm = as_modulus(r)
    out = []
    for m in range(1, m_count + 1):
        ks = sqrt_mod(j * m % r, rm).values
        out.append(np.array(ks, dtype=np.int64))
    return out


def _sigma_block(
    ls: np.ndarray,
    alpha: np.ndarray,
    beta: np.ndarray,
    fvals: np.ndarray,
    roots: list[np.ndarray],
    r: int,
) -> tuple[float, float]:
    """Partial sum over one block of l values, exactly rounded."""
    M = len(beta)
    root_sums = np.zeros((len(ls), M), dtype=complex)
    for mi, ks in enumerate(roots):
        if ks.size:
            root_sums[:, mi] = _e1(np.outer(ls, ks) / r).sum(axis=1)
    terms = alpha[:, None] * beta[None, :] * root_sums
    terms *= _e1(np.outer(ls, fvals))
    z = csum(terms.ravel())
    return z.real, z.imag


def sigma_eval(inst: BilinearInstance, threads: int = 1) -> complex:
    """Exact evaluation of the double sum over all root collections.

    Splits the outer index range into contiguous blocks (one per
    thread), sums each block with exactly rounded accumulation, and
    merges partials in block order, so the result is independent of
    thread scheduling.
    """
    r = inst.r.n
    ls = np.arange(-inst.L, inst.L + 1, dtype=np.int64)
    alpha = np.array(inst.alpha, dtype=complex)
    beta = np.array(inst.beta, dtype=complex)
    fvals = inst.phase.eval_array(inst.M)
    roots = _root_arrays(r, inst.j, inst.M)
    if threads <= 1 or len(ls) < 2 * threads:
        re, im = _sigma_block(ls, alpha, beta, fvals, roots, r)
        return complex(re, im)
    bounds = np.linspace(0, len(ls), threads + 1, dtype=int)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futs = [
            pool.submit(
                _sigma_block,
                ls[lo:hi],
                alpha[lo:hi],
                beta,
                fvals,
                roots,
                r,
            )
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        parts = [f.result() for f in futs]
    return complex(math.fsum(p[0] for p in parts), math.fsum(p[1] for p in parts))


def _check_energy_args(r: int, j: int, M: int, H: int) -> None:
    if r % 2 == 0:
        raise ValueError(f"modulus must be odd, got {r}")
    if math.gcd(j, r) != 1:
        raise ValueError(f"j={j} must be coprime to {r}")
    if not (1 <= H <= M and 2 * M <= r):
        raise ValueError(f"need 1 <= H <= M <= r/2, got H={H} M={M} r={r}")


def energy_spectrum(r: int, j: int, M: int, H: int) -> np.ndarray:
    """A(d) for every d in [0, r) at once (index d mod r)."""
    _check_energy_args(r, j, M, H)
    roots = _root_arrays(r, j, M)
    out = np.zeros(r, dtype=np.int64)
    for m1 in range(1, M + 1):
        k1 = roots[m1 - 1]
        if not k1.size:
            continue
        for m2 in range(max(1, m1 - H), min(M, m1 + H) + 1):
            k2 = roots[m2 - 1]
            if not k2.size:
                continue
            d = (k1[:, None] - k2[None, :]) % r
            np.add.at(out, d.ravel(), 1)
    return out


def symmetric_residue(d: int, r: int) -> int:
    """The representative of d in (-r/2, r/2]."""
    s = d % r
    return s - r if 2 * s > r else s


def energy_count(r: int, j: int, M: int, H: int, d: int) -> EnergyCount:
    """A(d): root-pair quadruples at shift d, reported symmetrically."""
    _check_energy_args(r, j, M, H)
    roots = _root_arrays(r, j, M)
    count = 0
    for m1 in range(1, M + 1):
        k1set = set(int(k) for k in roots[m1 - 1])
        if not k1set:
            continue
        for m2 in range(max(1, m1 - H), min(M, m1 + H) + 1):
            for k2 in roots[m2 - 1]:
                if (int(k2) + d) % r in k1set:
                    count += 1
    return EnergyCount(symmetric_residue(d, r), count)


def _norms(inst: BilinearInstance) -> float:
    return inst.alpha_norm2 * inst.beta_norm_inf


def bound_thm1(inst: BilinearInstance, H: int) -> float:
    """Single-branch bound at averaging length H, times the norms."""
    cap = inst.M if inst.F == 0 else min(1.0 / (inst.L * inst.F), inst.M)
    if not (1 <= H <= cap + 1e-9):
        raise ValueError(f"H={H} outside [1, min(1/(LF), M)] = [1, {cap}]")
    L, M, r = inst.L, inst.M, inst.r.n
    core = (
        H ** -0.5 * L**0.5 * M
        + H**0.25 * L**0.25 * M
        + H ** -0.25 * L**0.25 * M**0.75 * r**0.25
    )
    return core * _norms(inst)


def bound_thm2(inst: BilinearInstance, H: int) -> Thm2Bound:
    """Two-branch bound keyed to the squarefree/squarefull split of r.

    first  = H^(-1/2) L^(1/2) M^(1/2) r^(1/2) + M^(1/2) r^(1/4) + M
    second = H^(-1/2) L^(1/2) M + H^(-1/2) M^(1/2) r^(1/2) s0^(-1/4)
             + L^(1/2) M^(1/2) r^(1/4) s1^(1/8) + M

    both times the norms; min is their minimum.
    """
    r = inst.r.n
    if r % 2 == 0:
        raise ValueError(f"modulus must be odd, got {r}")
    if not (1 <= H <= inst.M and 2 * inst.M <= r):
        raise ValueError(f"need 1 <= H <= M <= r/2, got H={H} M={inst.M} r={r}")
    L, M = inst.L, inst.M
    s0, s1 = inst.r.s0, inst.r.s1
    nn = _norms(inst)
    first = (H ** -0.5 * L**0.5 * M**0.5 * r**0.5 + M**0.5 * r**0.25 + M) * nn
    second = (
        H ** -0.5 * L**0.5 * M
        + H ** -0.5 * M**0.5 * r**0.5 * s0 ** -0.25
        + L**0.5 * M**0.5 * r**0.25 * s1**0.125
        + M
    ) * nn
    return Thm2Bound(first, second, min(first, second))


def bound_trivial(inst: BilinearInstance) -> float:
    return inst.L**0.5 * inst.M * _norms(inst)


def ones(count: int) -> tuple[complex, ...]:
    return (1 + 0j,) * count


def unit_phases(rng, count: int) -> tuple[complex, ...]:
    """count points on the unit circle, reproducible from the rng."""
    return tuple(cmath.exp(_TWO_PI * 1j * rng.uniform()) for _ in range(count))


def read_coeffs(path) -> tuple[complex, ...]:
    """Coefficient file: one "re im" pair per line, order = index."""
    out: list[complex] = []
    with open(path, "r", encoding="utf-8") as fh:
        for ln, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            fields = stripped.split()
            if len(fields) != 2:
                raise ValueError(f"{path}:{ln}: expected 're im', got {line!r}")
            try:
                out.append(complex(float(fields[0]), float(fields[1])))
            except ValueError as exc:
                raise ValueError(f"{path}:{ln}: {exc}") from None
    return tuple(out)


def write_coeffs(path, coeffs: Sequence[complex]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for z in coeffs:
            fh.write(f"{z.real:.17g} {z.imag:.17g}\n")
