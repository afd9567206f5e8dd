"""Farey counting near square-denominator fractions and the quadratic
forms of the large-sieve inequalities."""

import math
from fractions import Fraction

import pytest

import oracles
from modsums import (
    FareyQuery,
    LsInstance,
    OversizeError,
    SplitMix64,
    as_modulus,
    farey_count,
    lemma41_bound,
    ls_bound_eval,
    ls_quadform_classical,
    ls_quadform_square_moduli,
    ls_relation_check,
    params_pipeline,
    thm3_bound,
    unit_phases,
    z_breakpoints,
    z_range,
)


def test_pinned_count():
    # alpha = 1/4, delta = 1/100, Q = 5: exactly (2, 1) and (5, 6) land
    # in the window, the latter right on the boundary
    q = FareyQuery(Q=5, delta=Fraction(1, 100), alpha=Fraction(1, 4))
    assert farey_count(q) == 2
    assert abs(Fraction(6, 25) - Fraction(1, 4)) == Fraction(1, 100)
    # shrink the window a hair and the boundary hit drops out
    assert farey_count(FareyQuery(5, Fraction(99, 10000), alpha=Fraction(1, 4))) == 1


def test_matches_exact_rational_oracle():
    rng = SplitMix64(173)
    for _ in range(60):
        Q = rng.randint(1, 40)
        delta = Fraction(rng.randint(1, 50), rng.randint(100, 4000))
        alpha = Fraction(rng.randint(-200, 200), rng.randint(1, 300))
        got = farey_count(FareyQuery(Q=Q, delta=delta, alpha=alpha))
        assert got == oracles.farey_naive(Q, delta, alpha)


def test_translation_and_reflection_invariance():
    rng = SplitMix64(179)
    for _ in range(20):
        Q = rng.randint(1, 20)
        delta = Fraction(1, rng.randint(50, 500))
        alpha = Fraction(rng.randint(1, 100), rng.randint(1, 100))
        base = farey_count(FareyQuery(Q=Q, delta=delta, alpha=alpha))
        # integer translation permutes the numerators
        assert farey_count(FareyQuery(Q=Q, delta=delta, alpha=alpha + 1)) == base
        # reflection pairs (q, a) with (q, -a)
        assert farey_count(FareyQuery(Q=Q, delta=delta, alpha=-alpha)) == base


def test_monotone_in_window_and_range():
    q = FareyQuery(Q=12, delta=Fraction(1, 256), alpha=Fraction(3, 7))
    base = farey_count(q)
    assert farey_count(FareyQuery(Q=13, delta=Fraction(1, 256), alpha=Fraction(3, 7))) >= base
    assert farey_count(FareyQuery(Q=12, delta=Fraction(1, 128), alpha=Fraction(3, 7))) >= base


def test_structural_query_forms():
    with pytest.raises(ValueError):
        FareyQuery(Q=0, delta=Fraction(1, 10), alpha=Fraction(1, 2))
    with pytest.raises(ValueError):
        FareyQuery(Q=5, delta=Fraction(-1, 10), alpha=Fraction(1, 2))
    with pytest.raises(ValueError):
        FareyQuery(Q=5, delta=Fraction(1, 10))  # neither form given
    with pytest.raises(ValueError):
        FareyQuery(Q=5, delta=Fraction(1, 10), alpha=Fraction(1, 2), b=1,
                   r=as_modulus(3), z=Fraction(1, 10))
    with pytest.raises(ValueError):
        FareyQuery(Q=5, delta=Fraction(1, 10), b=1, r=as_modulus(3))  # z missing
    with pytest.raises(ValueError):
        FareyQuery(Q=5, delta=Fraction(1, 100), b=3, r=as_modulus(9),
                   z=Fraction(1, 100))  # b not a unit
    delta = Fraction(1, 400)
    lo, hi = z_range(delta, 7)
    q = FareyQuery(Q=9, delta=delta, b=2, r=as_modulus(7), z=lo)
    assert q.target == Fraction(2, 7) + lo
    assert q.thm3_compatible
    assert farey_count(q) == oracles.farey_naive(9, delta, q.target)
    # z outside the admissible window
    with pytest.raises(ValueError):
        FareyQuery(Q=9, delta=delta, b=2, r=as_modulus(7), z=hi * 2)
    # even r keeps gcd(b, r) = 1 possible while gcd(2b, r) > 1; the
    # flag reports that without rejecting the query
    q2 = FareyQuery(Q=9, delta=Fraction(1, 400), b=3, r=as_modulus(4), z=Fraction(1, 400))
    assert not q2.thm3_compatible


def test_z_window_exact_endpoints():
    for r in (3, 7, 45, 101):
        delta = Fraction(1, r * r * 4)
        lo, hi = z_range(delta, r)
        assert lo == delta
        assert (hi * r) ** 2 <= delta
        # nothing representable above hi stays inside the window
        bumped = Fraction(math.nextafter(float(hi), 1.0))
        if bumped > hi:
            assert (bumped * r) ** 2 > delta or bumped == hi
    with pytest.raises(ValueError):
        z_range(Fraction(1, 8), 3)  # needs delta <= 1/r^2


def test_breakpoint_grid_finds_the_maximum():
    rng = SplitMix64(181)
    Q, b, r = 12, 2, 9
    delta = Fraction(1, 2000)
    zmin, zmax = z_range(delta, r)
    grid = z_breakpoints(Q, b, r, delta)
    assert grid[0] == zmin and grid[-1] == zmax
    assert grid == sorted(grid)
    best_on_grid = max(
        farey_count(FareyQuery(Q=Q, delta=delta, b=b, r=as_modulus(r), z=z))
        for z in grid
    )
    # random probes never beat the breakpoint grid
    span = zmax - zmin
    for _ in range(120):
        z = zmin + span * Fraction(rng.randint(0, 10**6), 10**6)
        probe = farey_count(FareyQuery(Q=Q, delta=delta, b=b, r=as_modulus(r), z=z))
        assert probe <= best_on_grid


def test_guards_refuse_oversized_requests():
    with pytest.raises(OversizeError):
        farey_count(FareyQuery(Q=10**6, delta=Fraction(1, 10), alpha=Fraction(1, 3)))
    with pytest.raises(OversizeError):
        z_breakpoints(10**7, 1, 3, Fraction(1, 100), Fraction(1, 100), Fraction(1, 18))
    with pytest.raises(OversizeError):
        ls_quadform_square_moduli(LsInstance(10**4, 10**6, 0, (1,) * 10**6))
    # the refusal stays catchable as ValueError for old callers
    assert issubclass(OversizeError, ValueError)


def test_quadform_single_coefficient_gives_totient_sums():
    for Q in (1, 4, 6):
        inst = LsInstance(Q=Q, N=1, M_offset=3, coeffs=(1 + 0j,))
        assert ls_quadform_square_moduli(inst) == pytest.approx(
            sum(oracles.totient(q * q) for q in range(1, Q + 1))
        )
        assert ls_quadform_classical(inst) == pytest.approx(
            sum(oracles.totient(q) for q in range(1, Q + 1))
        )


def test_quadform_matches_double_loop():
    rng = SplitMix64(191)
    for m_offset in (0, 11):
        coeffs = unit_phases(rng, 12)
        inst = LsInstance(Q=5, N=12, M_offset=m_offset, coeffs=coeffs)
        want_sq = oracles.quadform_naive(5, 12, m_offset, coeffs, square=True)
        want_cl = oracles.quadform_naive(5, 12, m_offset, coeffs, square=False)
        assert ls_quadform_square_moduli(inst) == pytest.approx(want_sq, rel=1e-9)
        assert ls_quadform_classical(inst) == pytest.approx(want_cl, rel=1e-9)


def test_classical_form_within_sharp_envelope():
    # (N + Q^2 - 1) * Z with constant exactly one, no slack term
    rng = SplitMix64(193)
    for _ in range(25):
        Q = rng.randint(1, 8)
        N = rng.randint(1, 40)
        coeffs = unit_phases(rng, N)
        inst = LsInstance(Q=Q, N=N, M_offset=rng.randint(0, 50), coeffs=coeffs)
        assert ls_quadform_classical(inst) <= (N + Q * Q - 1) * inst.Z * (1 + 1e-12)


def test_instance_validation():
    with pytest.raises(ValueError):
        LsInstance(Q=0, N=1, M_offset=0, coeffs=(1,))
    with pytest.raises(ValueError):
        LsInstance(Q=1, N=2, M_offset=0, coeffs=(1,))
    inst = LsInstance(Q=2, N=3, M_offset=0, coeffs=(1, 2j, -1))
    assert inst.Z == pytest.approx(1 + 4 + 1)


def test_bound_eval_pinned_and_ordering():
    b = ls_bound_eval(1, 1)
    assert (b.original, b.refined, b.conjectured) == (3.0, 3.0, 2.0)
    rng = SplitMix64(197)
    for _ in range(40):
        Q, N = rng.randint(1, 10**4), rng.randint(1, 10**6)
        b = ls_bound_eval(Q, N)
        assert b.conjectured <= b.refined <= b.original + 1e-9
        assert b.refined == pytest.approx(
            Q**3 + N + min(Q**2 * math.sqrt(N), math.sqrt(Q) * N), rel=1e-12
        )
    with pytest.raises(ValueError):
        ls_bound_eval(0, 5)


def test_relation_check_small_instance():
    inst = LsInstance(Q=4, N=16, M_offset=0, coeffs=(0j,) * 16)
    rel = ls_relation_check(inst)
    assert rel.lhs == 0.0
    assert rel.rhs_max_P >= 1  # q = 1 always contributes a pair near b/r
    one = LsInstance(Q=3, N=9, M_offset=2, coeffs=(1,) + (0j,) * 8)
    rel_one = ls_relation_check(one)
    assert rel_one.lhs == pytest.approx(
        sum(oracles.totient(q * q) for q in range(1, 4))
    )


def test_params_pipeline_balances():
    # gamma = 0 with r close to Q^(3/4) pins the derived lengths
    Q = 4096
    r = 4097  # odd, within a hair of Q^(3/4) = 512... deliberately not:
    r = 511  # odd, 512 - 1
    got = params_pipeline(Q, r, 0.0)
    assert got.L == pytest.approx(math.sqrt(r) * Q**-0.25, rel=1e-9)
    assert got.H == pytest.approx(math.sqrt(r) / Q**0.25, rel=1e-9)
    assert got.M == pytest.approx(2.0 * Q**0.5)
    assert got.z == pytest.approx(1.0 / (Q**1.5 * r))
    # eps cancels out of L entirely
    other = params_pipeline(Q, r, 0.0, eps=0.2)
    assert other.L == pytest.approx(got.L, rel=1e-12)
    # exact Q^(1/8) shape at r = Q^(3/4)
    exact = params_pipeline(6561, 729, 0.0)
    assert exact.L == pytest.approx(6561**0.125, rel=1e-9)


def test_params_pipeline_flags_and_validation():
    ok = params_pipeline(4096, 511, 0.0)
    assert ok.valid and ok.lmh_ok and ok.rcond2_ok and ok.rcond3_ok
    # gamma beyond 1/2 leaves the third window condition unsatisfiable
    far = params_pipeline(4096, 511, 0.6)
    assert not far.rcond3_ok
    with pytest.raises(ValueError):
        params_pipeline(1, 3, 0.0)
    with pytest.raises(ValueError):
        params_pipeline(16, 10, 0.0)  # even r
    with pytest.raises(ValueError):
        params_pipeline(16, 3, -0.1)


def test_thm3_bound_pinned_and_parts():
    assert thm3_bound(1, 1) == pytest.approx(3.0)
    fm = as_modulus(45)  # squarefree part 5, squarefull part 9
    want = 64**0.625 * 45**-0.25 + 64**0.5 * 5**-0.25 + 64**0.25 * 45**0.25 * 9**0.125
    assert thm3_bound(64, fm) == pytest.approx(want, rel=1e-12)
    sf = as_modulus(105)
    want_sf = 16**0.625 * 105**-0.25 + 16**0.5 * 105**-0.25 + 16**0.25 * 105**0.25
    assert thm3_bound(16, sf) == pytest.approx(want_sf, rel=1e-12)
    with pytest.raises(ValueError):
        thm3_bound(16, 10)


def test_lemma41_bound_pinned():
    # N = Q^3 and z = 1/(Q^(3/2+gamma) r) collapse to 2 + Q^(1/2-gamma)
    for Q, gamma, r in ((16, 0.0, 9), (64, 0.25, 15), (256, 0.5, 45)):
        N = Q**3
        z = 1.0 / (Q ** (1.5 + gamma) * r)
        got = lemma41_bound(Q, N, r, z, 1.0 / N)
        assert got == pytest.approx(2.0 + Q ** (0.5 - gamma), rel=1e-12)
    assert lemma41_bound(1, 1, 1, 0.0, 0.0) == 1.0
    with pytest.raises(ValueError):
        lemma41_bound(0, 1, 1, 0.1, 0.1)
    with pytest.raises(ValueError):
        lemma41_bound(4, 1, 1, -0.1, 0.1)
