"""Acceptance gate: one test per numbered criterion, tolerances pinned.

Each test prints a one-line summary of the measured extremes so a
failing run shows the numbers, not just the assert.  Deviations are
normalised the same way the criteria state them; no tolerance is
loosened to fit the implementation.
"""

import cmath
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

import oracles
from modsums import (
    BilinearInstance,
    ExpSumParams,
    FareyQuery,
    PhaseSpec,
    SplitMix64,
    as_modulus,
    bound_thm2,
    cochrane_alpha_bound,
    critical_points,
    derive,
    esum_multiplicativity_check,
    factorize,
    farey_count,
    gauss_closed_form_grid,
    gauss_direct_grid,
    is_prime,
    ls_quadform_classical,
    LsInstance,
    mixed_sum_grid,
    partial_sums_by_class,
    sample_structured_params,
    sigma_eval,
    sqrt_mod,
    thm3_bound,
    unit_phases,
    z_breakpoints,
    z_range,
)

SEED = 2026


def test_criterion_01_quadratic_sum_closed_form():
    """Closed form equals direct summation on every (a, b) cell for
    every odd modulus up to 999, within 1e-6 * sqrt(c)."""
    t0 = time.time()
    worst = 0.0
    worst_c = 1
    for c in range(1, 1000, 2):
        dev = float(
            np.max(np.abs(gauss_closed_form_grid(c) - gauss_direct_grid(c)))
        ) / math.sqrt(c)
        if dev > worst:
            worst, worst_c = dev, c
    print(
        f"criterion 1: odd c <= 999 full grids, worst dev/sqrt(c) = "
        f"{worst:.3e} at c={worst_c}, {time.time()-t0:.1f}s"
    )
    assert worst <= 1e-6


def test_criterion_02_square_root_completeness():
    """Root sets match exhaustive squaring for every target mod every
    odd r <= 2000, and the set sizes sum to r."""
    t0 = time.time()
    checked = 0
    for r in range(1, 2001, 2):
        fm = factorize(r)
        table: dict[int, list[int]] = {}
        for k in range(r):
            table.setdefault(k * k % r, []).append(k)
        total = 0
        for s in range(r):
            got = sqrt_mod(s, fm).values
            assert got == table.get(s, []), f"root set mismatch at s={s}, r={r}"
            total += len(got)
            checked += 1
        assert total == r, f"set sizes sum to {total} != r = {r}"
    print(f"criterion 2: {checked} root sets verified, {time.time()-t0:.1f}s")


def _draw_odd_modulus_c3(rng: SplitMix64, r2_max: int) -> int:
    u = rng.uniform()
    if u < 0.5:
        lo, hi = math.log(3), math.log(r2_max)
        n = round(math.exp(lo + (hi - lo) * rng.uniform())) | 1
    else:
        n = rng.randint(501, r2_max // 2) * 2 + 1
    if u < 0.25:
        f = rng.choice((9, 25, 27, 49, 121, 125))
        if math.gcd(n, f) == 1 and n * f <= r2_max:
            n *= f
    return n


def test_criterion_03_multiplicativity_sweep():
    """10^4 seeded tuples, odd moduli up to 10^5, every coprime split;
    deviation stays within 1e-6 * sqrt(r2)."""
    t0 = time.time()
    rng = SplitMix64(SEED)
    worst = 0.0
    worst_n = 1
    splits = 0
    for _ in range(10_000):
        n = _draw_odd_modulus_c3(rng, 10**5)
        params = sample_structured_params(rng, as_modulus(n))
        qs = params.modulus.prime_powers()
        scale = math.sqrt(n)
        for bits in range(1 << len(qs)):
            q1 = math.prod(q for k, q in enumerate(qs) if bits >> k & 1)
            res = esum_multiplicativity_check(params, q1, n // q1)
            splits += 1
            dev = res.deviation / scale
            if dev > worst:
                worst, worst_n = dev, n
    print(
        f"criterion 3: 10000 tuples, {splits} splits, worst dev/sqrt(r2) = "
        f"{worst:.3e} at r2={worst_n}, {time.time()-t0:.0f}s"
    )
    assert worst <= 1e-6


def test_criterion_04_stationary_phase_classification():
    """For seven prime powers and 500 applicable tuples each: classes
    off the critical set vanish, classes on it obey the multiplicity
    bound."""
    t0 = time.time()
    moduli = ((3, 3), (3, 4), (3, 7), (5, 3), (5, 5), (7, 3), (7, 4))
    off_worst = 0.0
    crit_worst = 0.0
    crit_seen = 0
    for p, m in moduli:
        rng = SplitMix64(derive(SEED, p, m))
        kept = 0
        attempts = 0
        scale = p ** (m / 2)
        while kept < 500:
            attempts += 1
            assert attempts < 50_000, f"cannot reach 500 tuples at {p}^{m}"
            params = sample_structured_params(rng, as_modulus(p**m))
            try:
                ctx = critical_points(p, m, params)
            except ValueError:
                continue  # argument degenerate mod p, classification empty
            if not ctx.applicable:
                continue
            kept += 1
            sums = np.abs(partial_sums_by_class(p, m, params))
            crit = dict(ctx.critical_points)
            for alpha in range(p):
                if alpha in crit:
                    cap = cochrane_alpha_bound(ctx, crit[alpha])
                    crit_worst = max(crit_worst, sums[alpha] / cap)
                    crit_seen += 1
                else:
                    off_worst = max(off_worst, sums[alpha] / scale)
    print(
        f"criterion 4: off-critical worst = {off_worst:.3e} (tol 1e-6), "
        f"critical worst ratio = {crit_worst:.9f} over {crit_seen} points, "
        f"{time.time()-t0:.1f}s"
    )
    assert off_worst <= 1e-6
    # the bound is attained with equality on tight cells; allow only
    # float-comparison headroom, not a looser constant
    assert crit_worst <= 1 + 1e-9


# one deterministic scan shared by the envelope test and its companion:
# 200 seeded draws per odd prime up to 200, each evaluated on its full
# (a, v) grid, plus one pinned extremal tuple at p = 199
_SCAN_CACHE: dict[str, object] = {}


def _prime_grid_scan():
    if _SCAN_CACHE:
        return _SCAN_CACHE
    t0 = time.time()
    violations = []  # (p, sup, cap3) against 3 sqrt(p) gcd(p, g4)^(1/2)
    sup_over_5 = 0.0
    grids = 0
    for p in (q for q in range(3, 201) if is_prime(q)):
        rng = SplitMix64(derive(SEED, 5, p))
        draws = [sample_structured_params(rng, as_modulus(p)) for _ in range(200)]
        if p == 199:
            # extremal tuple pinned so the scan cannot drift off it
            draws.append(
                ExpSumParams(
                    g0=49, g4=23, l1=187, a=0, f4=3, f5=7, f6=2, f7=-10,
                    v=0, modulus=as_modulus(199), j=109,
                )
            )
        for params in draws:
            try:
                grid = np.abs(mixed_sum_grid(p, params))
            except ValueError:
                continue  # argument identically zero mod p: empty sum
            grids += 1
            sup = float(grid.max())
            root = math.sqrt(p) * math.sqrt(math.gcd(p, params.g4))
            sup_over_5 = max(sup_over_5, sup / (5.0 * root))
            if sup > 3.0 * root:
                violations.append((p, sup, 3.0 * root))
    _SCAN_CACHE.update(
        violations=violations,
        sup_over_5=sup_over_5,
        grids=grids,
        seconds=time.time() - t0,
    )
    return _SCAN_CACHE


def test_criterion_05_prime_sum_envelope_constant_three():
    """|S| <= 3 sqrt(p) gcd(p, g4)^(1/2) over full (a, v) grids for all
    odd p <= 200.

    This is asserted exactly as stated.  The measured sums exceed the
    constant 3 on a reproducible family of tuples (several primes near
    200, worst excess around 16 percent), so the criterion fails; see
    the companion test below for the constant that the same scan does
    support.  The deviation is not a numerical artifact: the direct
    per-cell evaluator agrees with the grid transform to 1e-9.
    """
    scan = _prime_grid_scan()
    viol = scan["violations"]
    primes = sorted({p for p, _, _ in viol})
    worst = max((s / c for _, s, c in viol), default=0.0)
    print(
        f"criterion 5: {scan['grids']} full grids scanned in "
        f"{scan['seconds']:.1f}s; {len(viol)} cells exceed the constant-3 "
        f"envelope at primes {primes}, worst excess ratio {worst:.4f}"
    )
    assert not viol, (
        f"envelope with constant 3 fails at primes {primes}: "
        f"worst measured/bound = {worst:.6f} (e.g. p=199, tuple "
        f"g0=49 g4=23 l1=187 f4=3 f5=7 f6=2 f7=-10 j=109 at cell "
        f"a=77 v=59: |S| = 42.5676 > 42.3202 = 3*sqrt(199))"
    )


def test_prime_sum_envelope_constant_five_companion():
    """Companion to the previous test, not a numbered criterion: the
    same exhaustive scan respects 5 sqrt(p) gcd(p, g4)^(1/2), the
    constant given by counting all five poles and zeros of the phase
    and argument pair."""
    scan = _prime_grid_scan()
    print(
        f"companion: sup |S| / (5 sqrt(p) gcd^(1/2)) = "
        f"{scan['sup_over_5']:.4f} over {scan['grids']} grids"
    )
    assert scan["sup_over_5"] <= 1.0


def test_criterion_06_bilinear_oracle():
    """sigma_eval agrees with the independent triple loop on 1000
    seeded draws over odd moduli up to 255."""
    t0 = time.time()
    rng = SplitMix64(derive(SEED, 6))
    worst = 0.0
    tables: dict[int, dict[int, list[int]]] = {}
    for case in range(1000):
        r = 2 * rng.randint(1, 127) + 1
        if r not in tables:
            tables[r] = oracles.root_table(r)
        j = rng.randint(1, r)
        while math.gcd(j, r) != 1:
            j = rng.randint(1, r)
        L = rng.randint(1, min(10, r))
        M = rng.randint(1, min(32, r))
        alpha = unit_phases(rng, 2 * L + 1)
        beta = unit_phases(rng, M)
        kind = case % 3
        if kind == 0:
            phase, F = PhaseSpec.zero(), 0.0
        elif kind == 1:
            amp = (0.2 + 1.5 * rng.uniform()) / L
            phase, F = PhaseSpec.scaled_sqrt(amp), amp / 2
        else:
            phase, F = PhaseSpec.table([rng.uniform() for _ in range(M)]), 1.0 / L
        H = max(1, int(min(M if F == 0 else 1.0 / (L * F), M)))
        inst = BilinearInstance(
            r=factorize(r), j=j, L=L, M=M, alpha=alpha, beta=beta,
            phase=phase, F=F, H=H,
        )
        got = sigma_eval(inst)
        want = oracles.sigma_naive(
            r, j, L, M, alpha, beta, list(phase.eval_array(M)), tables[r]
        )
        worst = max(worst, abs(got - want) / (L * M))
    print(
        f"criterion 6: 1000 cases, worst dev/(L*M) = {worst:.3e}, "
        f"{time.time()-t0:.1f}s"
    )
    assert worst <= 1e-6


def _draw_sweep_modulus(rng: SplitMix64, lo: int, hi: int, heavy: bool) -> int:
    while True:
        if not heavy:
            r = 2 * rng.randint(lo // 2, (hi - 1) // 2) + 1
        else:
            p = rng.choice((3, 5, 7, 11, 13))
            e = rng.randint(2, 4 if p <= 5 else 2)
            base = p**e
            if base > hi:
                continue
            r = base * (2 * rng.randint(0, (hi // base - 1) // 2) + 1)
        if lo <= r <= hi and r % 2 == 1:
            return r


def test_criterion_07_second_bound_ratio_sweep():
    """Measured-to-bound ratios over 200 moduli in [101, 9999], half
    squarefull-heavy: capped by 100 and non-increasing between decades."""
    t0 = time.time()
    rng = SplitMix64(derive(SEED, 7))
    decade_max = {}
    for decade, (lo, hi) in (("2", (101, 999)), ("3", (1001, 9999))):
        best = 0.0
        for i in range(100):
            r = _draw_sweep_modulus(rng, lo, hi, heavy=i % 2 == 1)
            fm = factorize(r)
            L = rng.randint(2, 12)
            M = rng.randint(8, min(64, r // 2))
            alpha = unit_phases(rng, 2 * L + 1)
            beta = unit_phases(rng, M)
            if i % 4 < 2:
                phase, F, H = PhaseSpec.zero(), 0.0, M
            else:
                amp = (0.2 + rng.uniform()) / L
                phase, F = PhaseSpec.scaled_sqrt(amp), amp / 2
                H = max(1, int(min(1.0 / (L * F), M)))
            j = rng.randint(1, r)
            while math.gcd(j, r) != 1:
                j = rng.randint(1, r)
            inst = BilinearInstance(
                r=fm, j=j, L=L, M=M, alpha=alpha, beta=beta,
                phase=phase, F=F, H=H,
            )
            ratio = abs(sigma_eval(inst)) / bound_thm2(inst, H).min
            best = max(best, ratio)
        decade_max[decade] = best
    print(
        f"criterion 7: decade maxima {decade_max['2']:.4f} (r<10^3) -> "
        f"{decade_max['3']:.4f} (r<10^4), {time.time()-t0:.1f}s"
    )
    assert decade_max["2"] <= 100 and decade_max["3"] <= 100
    assert decade_max["3"] <= decade_max["2"], "ratio grew with the modulus"


def _squarefree_window(Q: int) -> list[int]:
    lo = max(3, math.ceil(Q**0.6))
    hi = max(lo, math.floor(Q**0.9))
    return [r for r in range(lo | 1, hi + 1, 2) if factorize(r).is_squarefree]


def test_criterion_08_farey_oracle_and_window_sweep():
    """Exact coprime-pair counts match the rational oracle; the counts
    along breakpoint z-grids stay within 100x the three-term bound with
    a stable constant; cells with r near Q^(3/4) tabulate against the
    Q^(7/16) prediction."""
    t0 = time.time()
    rng = SplitMix64(derive(SEED, 8))
    for _ in range(200):
        Q = rng.randint(1, 60)
        delta = Fraction(rng.randint(1, 40), rng.randint(200, 5000))
        alpha = Fraction(rng.randint(-300, 300), rng.randint(1, 400))
        got = farey_count(FareyQuery(Q=Q, delta=delta, alpha=alpha))
        assert got == oracles.farey_naive(Q, delta, alpha)

    per_q: dict[int, float] = {}
    for Q in (16, 24, 32, 48, 64):
        window = _squarefree_window(Q)
        rng_q = SplitMix64(derive(SEED, 8, Q))
        best = 0.0
        for _ in range(3):
            r = window[rng_q.randrange(len(window))]
            delta = min(Fraction(1, Q**3), Fraction(1, r * r))
            bound = thm3_bound(Q, r)
            for _ in range(3):
                b = rng_q.randint(1, r - 1)
                while math.gcd(2 * b, r) != 1:
                    b = rng_q.randint(1, r - 1)
                zmin, zmax = z_range(delta, r)
                for z in z_breakpoints(Q, b, r, delta, zmin, zmax):
                    c = farey_count(
                        FareyQuery(Q=Q, delta=delta, b=b, r=as_modulus(r), z=z)
                    )
                    best = max(best, c / bound)
        per_q[Q] = best
    cap = max(per_q.values())
    small = max(per_q[16], per_q[24], per_q[32])
    large = max(per_q[48], per_q[64])

    lines = ["Q r maxP pred ratio"]
    for Q in (16, 24, 32, 48, 64):
        target = Q**0.75
        cands = [
            r for r in range(3, 2 * int(target) + 4, 2)
            if factorize(r).is_squarefree
        ]
        r = min(cands, key=lambda x: abs(x - target))
        delta = min(Fraction(1, Q**3), Fraction(1, r * r))
        rng_q = SplitMix64(derive(SEED, 8, Q, 1))
        best_count = 0
        for _ in range(3):
            b = rng_q.randint(1, max(1, r - 1))
            while math.gcd(2 * b, r) != 1:
                b = rng_q.randint(1, max(1, r - 1))
            zmin, zmax = z_range(delta, r)
            for z in z_breakpoints(Q, b, r, delta, zmin, zmax):
                best_count = max(
                    best_count,
                    farey_count(FareyQuery(Q=Q, delta=delta, b=b, r=as_modulus(r), z=z)),
                )
        pred = Q ** (7 / 16)
        lines.append(f"{Q} {r} {best_count} {pred:.3f} {best_count / pred:.4f}")
        assert best_count <= 100 * pred

    print(
        f"criterion 8: oracle 200/200; sweep constants "
        f"{ {q: round(v, 4) for q, v in per_q.items()} }; "
        f"{time.time()-t0:.1f}s\n" + "\n".join(lines)
    )
    assert cap <= 100
    assert large <= small, "sweep constant grew with Q"


def test_criterion_09_classical_sieve_sharp_constant():
    """The classical quadratic form stays within (N + Q^2 - 1) * Z with
    the constant exactly one, over 100 seeded instances."""
    t0 = time.time()
    rng = SplitMix64(derive(SEED, 9))
    worst = 0.0
    for _ in range(100):
        Q = rng.randint(1, 10)
        N = rng.randint(1, 120)
        coeffs = unit_phases(rng, N)
        inst = LsInstance(Q=Q, N=N, M_offset=rng.randint(0, 300), coeffs=coeffs)
        envelope = (N + Q * Q - 1) * inst.Z
        worst = max(worst, ls_quadform_classical(inst) / envelope)
    print(f"criterion 9: worst form/envelope = {worst:.6f}, {time.time()-t0:.1f}s")
    assert worst <= 1.0


_CLI_CASES = [
    ["gauss-verify", "c_max=45", "samples=1"],
    ["sqrt-verify", "r_max=25", "samples=1"],
    ["expsum-verify", "tuples=1", "r2_max=225", "p=3", "m=3", "cochrane_tuples=1"],
    ["bilinear-sweep", "cases=3", "r_min=101", "r_max=151", "l_max=8", "m_max=16"],
    ["farey-count"],
    ["sieve-sweep", "q=4", "n=12", "instances=2", "relation_q=3", "relation_n=9"],
    ["thm3-sweep", "q_list=16,24", "r_per_q=1", "b_per_r=1"],
]


def test_criterion_10_cli_determinism(tmp_path):
    """Any command rerun with the same seed writes byte-identical
    reports, in both formats."""
    t0 = time.time()
    for case in _CLI_CASES:
        for fmt in ("csv", "json"):
            outs = []
            for tag in ("a", "b"):
                out = tmp_path / f"{case[0]}-{tag}.{fmt}"
                proc = subprocess.run(
                    [
                        sys.executable, "-m", "modsums", *case,
                        "--seed", "99", "--format", fmt, "--out", str(out),
                    ],
                    capture_output=True, text=True, timeout=300,
                )
                assert proc.returncode == 0, (case, fmt, proc.stderr)
                outs.append(out.read_bytes())
            assert outs[0] == outs[1], f"rerun of {case[0]} ({fmt}) differed"
            assert outs[0]
    print(f"criterion 10: {len(_CLI_CASES)} commands x 2 formats byte-stable, "
          f"{time.time()-t0:.1f}s")
