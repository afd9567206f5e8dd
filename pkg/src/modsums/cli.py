"""Command line front end: config-driven verification sweeps.

Seven subcommands expose every library operation:

  gauss-verify    closed form against direct summation on (a, b) grids
  sqrt-verify     square-root sets against exhaustive squaring tables
  expsum-verify   multiplicativity, stationary-phase classification,
                  partial-sum partition, envelope ratios
  bilinear-sweep  sigma against its bounds, energy counts
  farey-count     the coprime-pair counter P, plain or structural
  sieve-sweep     square-moduli quadratic form, bound shapes, the
                  classical form, the P-relation statistic
  thm3-sweep      P along the admissible z window against the
                  three-term modulus bound

Configuration is a plain key=value text file (one pair per line, '#'
comments); the same keys can be given on the command line as key=value
arguments, and --seed/--out/--format/--threads override both.  Errors
cite the file line or argv position that caused them.

Reports are CSV (default) or JSON.  CSV starts with the schema comment
line '# schema=1'; all floats are printed with 12 significant digits;
rows are canonically sorted, so a rerun with the same seed writes
byte-identical files.  One summary line goes to stdout.

Exit status: 0 all checks passed, 1 some mathematical check failed,
2 configuration error, 3 environment trouble (I/O failure or an
oversize-instance guard refusal; the stderr prefix says which).
"""

from __future__ import annotations

import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import arith, bilinear, expsum, gauss, sieve, sqrtmod
from .rng import SplitMix64
from .sieve import OversizeError

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "COMMANDS",
    "SCHEMA_VERSION",
    "EXIT_OK",
    "EXIT_MATH",
    "EXIT_CONFIG",
    "EXIT_ENV",
    "run",
    "main",
]

SCHEMA_VERSION = 1
EXIT_OK = 0
EXIT_MATH = 1
EXIT_CONFIG = 2
EXIT_ENV = 3

_RESERVED = ("command", "seed", "out", "format", "threads")


class ConfigError(Exception):
    """Bad configuration; the message names the offending field."""


class _HelpRequested(Exception):
    pass


_USAGE = """\
usage: modsums [command] [--config PATH] [--seed U64] [--out PATH]
               [--format csv|json] [--threads N] [key=value ...]

commands:
  gauss-verify sqrt-verify expsum-verify bilinear-sweep
  farey-count sieve-sweep thm3-sweep

The command may also be given as 'command=...' in the config file.
Per-command grid keys are documented in the README; unknown keys are
rejected with the file line or argv position they came from.
"""


# ---------------------------------------------------------------- config


def _parse_kv_text(text: str, source: str) -> list[tuple[str, str, str]]:
    """(location, key, value) triples from key=value lines."""
    out = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not sep or not key:
            raise ConfigError(f"{source}:{ln}: expected key=value, got {raw.strip()!r}")
        out.append((f"{source}:{ln}", key, val))
    return out


@dataclass
class ExperimentConfig:
    """One resolved run: command, seed, emission options, grid keys.

    ``grid`` holds the per-command parameters as raw strings; they are
    typed and validated by the subcommand that consumes them, so error
    messages can cite ``origin[key]`` (file line or argv position).
    """

    command: str
    seed: int = 0
    out: str | None = None
    format: str = "csv"
    threads: int | None = None
    grid: dict[str, str] = field(default_factory=dict)
    origin: dict[str, str] = field(default_factory=dict)


def _parse_u64(loc: str, key: str, val: str) -> int:
    try:
        n = int(val, 0)
    except ValueError:
        raise ConfigError(f"{loc}: {key} must be an integer, got {val!r}") from None
    if not 0 <= n < 1 << 64:
        raise ConfigError(f"{loc}: {key} must fit in 64 bits, got {n}")
    return n


def _build_config(argv: list[str]) -> ExperimentConfig:
    command_tok: tuple[str, str] | None = None
    flags: dict[str, tuple[str, str]] = {}
    overrides: list[tuple[str, str, str]] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("-h", "--help"):
            raise _HelpRequested
        if tok in ("--config", "--seed", "--out", "--format", "--threads"):
            if i + 1 >= len(argv):
                raise ConfigError(f"argv[{i + 1}]: flag {tok} needs a value")
            flags[tok[2:]] = (f"argv[{i + 1}]", argv[i + 1])
            i += 2
            continue
        if tok.startswith("-"):
            raise ConfigError(f"argv[{i + 1}]: unknown flag {tok}")
        if "=" in tok:
            key, _, val = tok.partition("=")
            key, val = key.strip(), val.strip()
            if not key:
                raise ConfigError(f"argv[{i + 1}]: expected key=value, got {tok!r}")
            overrides.append((f"argv[{i + 1}]", key, val))
        elif command_tok is None:
            command_tok = (f"argv[{i + 1}]", tok)
        else:
            raise ConfigError(f"argv[{i + 1}]: unexpected argument {tok!r}")
        i += 1

    entries: list[tuple[str, str, str]] = []
    if "config" in flags:
        loc, path = flags["config"]
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"{loc}: cannot read config file: {exc}") from None
        entries.extend(_parse_kv_text(text, path))
    entries.extend(overrides)
    for name in ("seed", "out", "format", "threads"):
        if name in flags:
            loc, val = flags[name]
            entries.append((loc, name, val))

    cfg = ExperimentConfig(command="")
    if command_tok is not None:
        cfg.command = command_tok[1]
        cfg.origin["command"] = command_tok[0]
    for loc, key, val in entries:
        if key == "command":
            cfg.command = val
        elif key == "seed":
            cfg.seed = _parse_u64(loc, "seed", val)
        elif key == "out":
            cfg.out = val
        elif key == "format":
            if val not in ("csv", "json"):
                raise ConfigError(f"{loc}: format must be csv or json, got {val!r}")
            cfg.format = val
        elif key == "threads":
            try:
                t = int(val)
            except ValueError:
                raise ConfigError(f"{loc}: threads must be an integer, got {val!r}") from None
            if t < 1:
                raise ConfigError(f"{loc}: threads must be >= 1, got {t}")
            cfg.threads = t
        else:
            cfg.grid[key] = val
        cfg.origin[key] = loc

    if not cfg.command:
        raise ConfigError("no command given (positional argument or command=... key)")
    if cfg.command not in _RUNNERS:
        known = " ".join(sorted(_RUNNERS))
        loc = cfg.origin.get("command", "argv")
        raise ConfigError(f"{loc}: unknown command {cfg.command!r} (expected one of: {known})")
    return cfg


class _Grid:
    """Typed access to the per-command keys with located errors."""

    def __init__(self, cfg: ExperimentConfig, allowed: dict[str, str]):
        self.raw = cfg.grid
        self.origin = cfg.origin
        for key in cfg.grid:
            if key not in allowed:
                hint = ", ".join(sorted(allowed))
                raise ConfigError(
                    f"{self.origin.get(key, '?')}: unknown key {key!r} for"
                    f" {cfg.command} (expected one of: {hint})"
                )

    def _loc(self, key: str) -> str:
        return self.origin.get(key, "?")

    def has(self, key: str) -> bool:
        return key in self.raw

    def int(self, key: str, default: int, lo: int | None = None, hi: int | None = None) -> int:
        if key not in self.raw:
            n = default
        else:
            try:
                n = int(self.raw[key])
            except ValueError:
                raise ConfigError(
                    f"{self._loc(key)}: {key} must be an integer, got {self.raw[key]!r}"
                ) from None
        if lo is not None and n < lo:
            raise ConfigError(f"{self._loc(key)}: {key} must be >= {lo}, got {n}")
        if hi is not None and n > hi:
            raise ConfigError(f"{self._loc(key)}: {key} must be <= {hi}, got {n}")
        return n

    def float(self, key: str, default: float, lo: float | None = None) -> float:
        if key not in self.raw:
            return default
        try:
            x = float(self.raw[key])
        except ValueError:
            raise ConfigError(
                f"{self._loc(key)}: {key} must be a number, got {self.raw[key]!r}"
            ) from None
        if lo is not None and x < lo:
            raise ConfigError(f"{self._loc(key)}: {key} must be >= {lo}, got {x}")
        return x

    def fraction(self, key: str, default: Fraction | None) -> Fraction | None:
        if key not in self.raw:
            return default
        try:
            return Fraction(self.raw[key])
        except (ValueError, ZeroDivisionError):
            raise ConfigError(
                f"{self._loc(key)}: {key} must be a rational like 1/100 or 0.01,"
                f" got {self.raw[key]!r}"
            ) from None

    def choice(self, key: str, default: str, allowed: tuple[str, ...]) -> str:
        val = self.raw.get(key, default)
        if val not in allowed:
            raise ConfigError(
                f"{self._loc(key)}: {key} must be one of {'/'.join(allowed)}, got {val!r}"
            )
        return val

    def int_list(self, key: str, default: tuple[int, ...]) -> tuple[int, ...]:
        if key not in self.raw:
            return default
        try:
            vals = tuple(int(part) for part in self.raw[key].split(",") if part.strip())
        except ValueError:
            raise ConfigError(
                f"{self._loc(key)}: {key} must be comma-separated integers,"
                f" got {self.raw[key]!r}"
            ) from None
        if not vals:
            raise ConfigError(f"{self._loc(key)}: {key} must not be empty")
        return vals


# -------------------------------------------------------------- emission


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _json_value(x):
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, float):
        return float(f"{x:.12g}")
    return x


def _write_report(path: str, fmt: str, command: str, seed: int,
                  columns: list[str], rows: list[dict]) -> None:
    if fmt == "csv":
        lines = [f"# schema={SCHEMA_VERSION}", ",".join(columns)]
        for row in rows:
            lines.append(",".join(_fmt(row[c]) for c in columns))
        data = "\n".join(lines) + "\n"
    else:
        payload = {
            "schema": SCHEMA_VERSION,
            "command": command,
            "seed": seed,
            "columns": columns,
            "rows": [{c: _json_value(row[c]) for c in columns} for row in rows],
        }
        data = json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(data)


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


# -------------------------------------------------------------- runners
#
# Each runner returns (columns, rows, failures, max_ratio).  Rows are
# dicts keyed by column name; every runner sorts its rows canonically
# before returning so emission order never depends on scheduling.


def _run_gauss(grid: _Grid, rng: SplitMix64, threads: int):
    c_min = grid.int("c_min", 3, lo=1)
    c_max = grid.int("c_max", 99, lo=c_min)
    samples = grid.int("samples", 2, lo=0)
    columns = ["c", "grid_max_err", "tol", "spot_err", "spot_a", "spot_b",
               "eps_im", "jac", "status"]
    rows, failures, max_ratio = [], 0, 0.0
    for c in range(c_min | 1, c_max + 1, 2):
        direct = gauss.gauss_direct_grid(c)
        closed = gauss.gauss_closed_form_grid(c)
        grid_err = float(abs(direct - closed).max())
        tol = 1e-6 * math.sqrt(c)
        sub = rng.spawn(1, c)
        spot_err, spot_a, spot_b, jac = 0.0, 0, 0, 1
        for _ in range(samples):
            a, b = sub.randrange(c), sub.randrange(c)
            p = gauss.GaussSumParams(a, b, c)
            err = abs(gauss.gauss_direct(p) - gauss.gauss_closed_form(p))
            if err >= spot_err:
                spot_err, spot_a, spot_b = float(err), a, b
            jac = arith.jacobi(a, c)
        eps_im = gauss.epsilon_c(c).imag
        ok = grid_err <= tol and spot_err <= tol
        failures += not ok
        max_ratio = max(max_ratio, grid_err / tol)
        rows.append({"c": c, "grid_max_err": grid_err, "tol": tol,
                     "spot_err": spot_err, "spot_a": spot_a, "spot_b": spot_b,
                     "eps_im": eps_im, "jac": jac, "status": _status(ok)})
    rows.sort(key=lambda r: r["c"])
    return columns, rows, failures, max_ratio


def _run_sqrt(grid: _Grid, rng: SplitMix64, threads: int):
    r_min = grid.int("r_min", 3, lo=1)
    r_max = grid.int("r_max", 99, lo=r_min)
    samples = grid.int("samples", 3, lo=1)
    columns = ["r", "root_total", "identity_ok", "table_ok", "crt_ok", "status"]
    rows, failures = [], 0
    for r in range(r_min | 1, r_max + 1, 2):
        rm = arith.factorize(r)
        table: dict[int, list[int]] = {}
        for k in range(r):
            table.setdefault(k * k % r, []).append(k)
        total = 0
        table_ok = True
        nonempty = []
        for s in range(r):
            got = sqrtmod.sqrt_mod(s, rm).values
            total += len(got)
            if got:
                nonempty.append(s)
            if got != sorted(table.get(s, [])):
                table_ok = False
        identity_ok = total == r
        sub = rng.spawn(2, r)
        crt_ok = True
        for _ in range(samples):
            s = sub.choice(nonempty)
            parts = []
            for p, e in rm.factors:
                part = (sqrtmod.sqrt_mod_prime(s, p) if e == 1
                        else sqrtmod.sqrt_mod_prime_power(s, p, e))
                parts.append(part)
            # recombine one root choice per prime power; it must land
            # in the full set
            pick = [pp.roots[sub.randrange(len(pp.roots))] for pp in parts
                    if len(pp.roots) > 0]
            if len(pick) == len(rm.factors):
                combined = arith.crt_combine(pick)
                if combined.value not in sqrtmod.sqrt_mod(s, rm):
                    crt_ok = False
            else:
                # s has roots mod r, so every prime-power factor set is
                # nonempty; reaching here is itself a failure
                crt_ok = False
        ok = identity_ok and table_ok and crt_ok
        failures += not ok
        rows.append({"r": r, "root_total": total, "identity_ok": identity_ok,
                     "table_ok": table_ok, "crt_ok": crt_ok,
                     "status": _status(ok)})
    rows.sort(key=lambda row: row["r"])
    return columns, rows, failures, 0.0


def _coprime_splits(rm) -> list[tuple[int, int]]:
    """Unordered coprime factorizations q1*q2 = n with q1 <= q2."""
    pps = [p**e for p, e in rm.factors]
    n = rm.n
    seen = set()
    for mask in range(1 << len(pps)):
        q1 = 1
        for i, q in enumerate(pps):
            if mask >> i & 1:
                q1 *= q
        q2 = n // q1
        seen.add((min(q1, q2), max(q1, q2)))
    out = sorted(seen)
    if len(out) > 1:
        out = [s for s in out if s[0] > 1]
    return out


_PRIME_POWER_POOL = (
    (3, 3), (3, 9), (3, 27), (5, 5), (5, 25), (5, 125), (7, 7), (7, 49),
    (11, 11), (11, 121), (13, 13), (17, 17), (19, 19), (23, 23), (29, 29),
    (31, 31), (37, 37), (41, 41),
)


def _draw_odd_modulus(sub: SplitMix64, r2_max: int, composite: bool) -> int:
    """Random odd modulus; composite=True multiplies coprime prime
    powers so multiplicativity rows get nontrivial splits."""
    if composite:
        n, used = 1, set()
        for _ in range(12):
            p, q = _PRIME_POWER_POOL[sub.randrange(len(_PRIME_POWER_POOL))]
            if p in used or n * q > r2_max:
                continue
            n *= q
            used.add(p)
            if len(used) >= 3:
                break
        if len(used) >= 2:
            return n
    return 2 * sub.randint(7, r2_max // 2) + 1


def _expsum_row(check: str, modulus: int, label: str, measured: float,
                reference: float, deviation: float, tol: float,
                ratio: float, ok: bool) -> dict:
    return {"check": check, "modulus": modulus, "label": label,
            "measured": measured, "reference": reference,
            "deviation": deviation, "tol": tol, "ratio": ratio,
            "status": _status(ok)}


def _run_expsum(grid: _Grid, rng: SplitMix64, threads: int):
    tuples = grid.int("tuples", 4, lo=0)
    r2_max = grid.int("r2_max", 3465, lo=15)
    p = grid.int("p", 5, lo=3)
    m = grid.int("m", 3, lo=2)
    cochrane_tuples = grid.int("cochrane_tuples", 3, lo=0)
    if not arith.is_prime(p) or p % 2 == 0:
        raise ConfigError(f"{grid._loc('p')}: p must be an odd prime, got {p}")
    columns = ["check", "modulus", "label", "measured", "reference",
               "deviation", "tol", "ratio", "status"]
    rows, failures, max_ratio = [], 0, 0.0

    for k in range(tuples):
        sub = rng.spawn(3, k)
        r2 = _draw_odd_modulus(sub, r2_max, composite=k % 2 == 1)
        params = expsum.sample_structured_params(sub, r2)
        rm = params.modulus
        direct = expsum.esum_eval(params)
        tol = 1e-6 * math.sqrt(r2)
        for q1, q2 in _coprime_splits(rm):
            res = expsum.esum_multiplicativity_check(params, q1, q2)
            a1 = params.a * arith.inv_mod(q2 % q1 if q1 > 1 else 1, q1).value % q1
            a2 = params.a * arith.inv_mod(q1 % q2 if q2 > 1 else 1, q2).value % q2
            ok = res.deviation <= tol
            failures += not ok
            max_ratio = max(max_ratio, res.deviation / tol)
            rows.append(_expsum_row(
                "mult", r2, f"q1={q1} q2={q2} a1={a1} a2={a2}",
                abs(direct), abs(res.rhs), res.deviation, tol,
                res.deviation / tol, ok))
        env = expsum.esum_bound_check(params)
        rows.append(_expsum_row(
            "envelope", r2, f"s0={rm.s0} s1={rm.s1}",
            env.measured, env.bound, 0.0, 0.0, env.ratio, True))

    pm = p**m
    for k in range(cochrane_tuples):
        sub = rng.spawn(5, k)
        best: tuple | None = None
        for _ in range(500):
            cand = expsum.sample_structured_params(sub, pm)
            try:
                got = expsum.critical_points(p, m, cand)
            except ValueError:
                continue
            if best is None or (got.applicable and not best[1].applicable):
                best = (cand, got)
            if got.applicable and got.critical_points:
                best = (cand, got)
                break
        if best is None:
            raise ConfigError(
                f"{grid._loc('p')}: no usable stationary-phase draw at {p}^{m}"
            )
        params, ctx = best
        total = expsum.mixed_sum_eval(p, m, params)
        parts = [expsum.partial_sum_alpha(p, m, params, alpha) for alpha in range(p)]
        part_dev = abs(total - sum(parts))
        part_tol = 1e-8 * p ** (m / 2)
        ok = part_dev <= part_tol
        failures += not ok
        rows.append(_expsum_row(
            "partition", pm, f"tuple={k} t={ctx.t}", abs(total),
            abs(sum(parts)), part_dev, part_tol, part_dev / part_tol, ok))
        if not ctx.applicable:
            rows.append(_expsum_row(
                "cochrane", pm, f"tuple={k} t={ctx.t} inapplicable",
                0.0, 0.0, 0.0, 0.0, 0.0, True))
            continue
        crit = dict(ctx.critical_points)
        off_tol = 1e-6 * p ** (m / 2)
        off_max = 0.0
        for alpha in range(p):
            if alpha in crit:
                nu = crit[alpha]
                bound = expsum.cochrane_alpha_bound(ctx, nu)
                measured = abs(parts[alpha])
                ok = measured <= bound * (1 + 1e-9)
                failures += not ok
                max_ratio = max(max_ratio, measured / bound)
                rows.append(_expsum_row(
                    "cochrane", pm, f"tuple={k} alpha={alpha} nu={nu} t={ctx.t}",
                    measured, bound, 0.0, 0.0, measured / bound, ok))
            else:
                off_max = max(off_max, abs(parts[alpha]))
        ok = off_max <= off_tol
        failures += not ok
        rows.append(_expsum_row(
            "offcrit", pm, f"tuple={k} t={ctx.t}", off_max, 0.0, off_max,
            off_tol, off_max / off_tol, ok))

    rows.sort(key=lambda r: (r["check"], r["modulus"], r["label"]))
    return columns, rows, failures, max_ratio


def _unit_mod(rng: SplitMix64, n: int) -> int:
    while True:
        x = rng.randint(1, n - 1)
        if math.gcd(x, n) == 1:
            return x


def _run_bilinear(grid: _Grid, rng: SplitMix64, threads: int):
    cases = grid.int("cases", 8, lo=0)
    r_min = grid.int("r_min", 101, lo=11)
    r_max = grid.int("r_max", 301, lo=r_min)
    l_max = grid.int("l_max", 24, lo=1)
    m_max = grid.int("m_max", 48, lo=2)
    h_energy_max = grid.int("h_energy_max", 6, lo=1)
    ratio_cap = grid.float("ratio_cap", 100.0, lo=0.0)
    columns = ["case", "r", "j", "L", "M", "phase", "F", "H", "sigma_abs",
               "thm1", "thm2_first", "thm2_second", "thm2_min", "trivial",
               "ratio_thm1", "ratio_thm2", "energy_h", "energy_d0",
               "gcd_avg", "status"]
    rows, failures, max_ratio = [], 0, 0.0
    for k in range(cases):
        sub = rng.spawn(4, k)
        r = 2 * sub.randint(r_min // 2, (r_max - 1) // 2) + 1
        rm = arith.factorize(r)
        j = _unit_mod(sub, r)
        L = sub.randint(1, min(l_max, r))
        M = sub.randint(2, max(2, min(m_max, (r - 1) // 2)))
        kind = ("zero", "scaled-sqrt", "table")[k % 3]
        if kind == "zero":
            phase = bilinear.PhaseSpec.zero()
            F = 0.0
        elif kind == "scaled-sqrt":
            amp = (0.4 + 1.2 * sub.uniform()) / L
            phase = bilinear.PhaseSpec.scaled_sqrt(amp)
            F = amp / 2.0
        else:
            phase = bilinear.PhaseSpec.table(sub.uniform() for _ in range(M))
            F = 1.0 / L
        cap = M if F == 0.0 else min(int(1.0 / (L * F)), M)
        H = max(1, cap)
        alpha = bilinear.unit_phases(sub, 2 * L + 1)
        beta = bilinear.unit_phases(sub, M)
        inst = bilinear.BilinearInstance(rm, j, L, M, alpha, beta, phase, F, H)
        sigma = bilinear.sigma_eval(inst, threads=threads)
        t1 = bilinear.bound_thm1(inst, H)
        t2 = bilinear.bound_thm2(inst, H)
        triv = bilinear.bound_trivial(inst)
        h_e = min(H, h_energy_max, M)
        e0 = bilinear.energy_count(r, j, M, h_e, 0)
        g_avg = arith.gcd_average(rm, M)
        ratio2 = abs(sigma) / t2.min
        ok = ratio2 <= ratio_cap
        failures += not ok
        max_ratio = max(max_ratio, ratio2)
        rows.append({"case": k, "r": r, "j": j, "L": L, "M": M,
                     "phase": kind, "F": F, "H": H, "sigma_abs": abs(sigma),
                     "thm1": t1, "thm2_first": t2.first,
                     "thm2_second": t2.second, "thm2_min": t2.min,
                     "trivial": triv, "ratio_thm1": abs(sigma) / t1,
                     "ratio_thm2": ratio2, "energy_h": h_e,
                     "energy_d0": e0.count, "gcd_avg": g_avg,
                     "status": _status(ok)})
    rows.sort(key=lambda row: (row["r"], row["case"]))
    return columns, rows, failures, max_ratio


def _run_farey(grid: _Grid, rng: SplitMix64, threads: int):
    q = grid.int("q", 5, lo=1)
    has_structural = grid.has("b") or grid.has("r") or grid.has("z")
    delta = grid.fraction("delta", Fraction(1, 100))
    n_eff = grid.int("n", max(1, round(1 / delta)), lo=1)
    breakpoints = grid.int("breakpoints", 0, lo=0, hi=1)
    columns = ["mode", "q", "delta", "alpha", "b", "r", "z", "count",
               "lemma41", "ratio", "status"]
    rows = []
    if has_structural:
        b = grid.int("b", 1)
        r = grid.int("r", 1, lo=1)
        zfrac = grid.fraction("z", None)
        try:
            if zfrac is None:
                zfrac = sieve.z_range(delta, r)[0]
            zs = (sieve.z_breakpoints(q, b, r, delta) if breakpoints
                  else [zfrac])
            queries = [sieve.FareyQuery(q, delta, b=b, r=arith.factorize(r), z=z)
                       for z in zs]
        except OversizeError:
            raise
        except ValueError as exc:
            raise ConfigError(f"{grid._loc('b')}: bad structural query: {exc}") from None
        for query in queries:
            count = sieve.farey_count(query)
            lem = sieve.lemma41_bound(q, n_eff, r, float(query.z), float(delta))
            rows.append({"mode": "structural", "q": q, "delta": float(delta),
                         "alpha": float(query.target), "b": b, "r": r,
                         "z": float(query.z), "count": count, "lemma41": lem,
                         "ratio": count / lem, "status": "pass"})
    else:
        alpha = grid.fraction("alpha", Fraction(1, 4))
        try:
            query = sieve.FareyQuery(q, delta, alpha=alpha)
        except ValueError as exc:
            raise ConfigError(f"{grid._loc('alpha')}: bad query: {exc}") from None
        count = sieve.farey_count(query)
        rows.append({"mode": "plain", "q": q, "delta": float(delta),
                     "alpha": float(alpha), "b": 0, "r": 0, "z": 0.0,
                     "count": count, "lemma41": 0.0, "ratio": 0.0,
                     "status": "pass"})
    rows.sort(key=lambda row: (row["mode"], row["z"]))
    max_ratio = max((row["ratio"] for row in rows), default=0.0)
    return columns, rows, 0, max_ratio


def _run_sieve(grid: _Grid, rng: SplitMix64, threads: int):
    q = grid.int("q", 6, lo=1)
    n = grid.int("n", 40, lo=1)
    instances = grid.int("instances", 12, lo=1)
    m_offset = grid.int("m_offset", 0)
    relation_instances = grid.int("relation_instances", 1, lo=0)
    relation_q = grid.int("relation_q", 4, lo=1)
    relation_n = grid.int("relation_n", 16, lo=1)
    columns = ["instance", "q", "n", "znorm", "quad_sq", "bound_original",
               "bound_refined", "bound_conjectured", "ratio_refined",
               "quad_classical", "classical_bound", "classical_ok",
               "rel_done", "rel_lhs", "rel_maxp", "rel_ratio", "status"]
    rows, failures, max_ratio = [], 0, 0.0
    bounds = sieve.ls_bound_eval(q, n)
    for i in range(instances):
        sub = rng.spawn(6, i)
        coeffs = bilinear.unit_phases(sub, n)
        inst = sieve.LsInstance(q, n, m_offset, coeffs)
        quad_sq = sieve.ls_quadform_square_moduli(inst)
        z = inst.Z
        ratio_refined = quad_sq / (z * bounds.refined)
        quad_cl = sieve.ls_quadform_classical(inst)
        cl_bound = (n + q * q - 1) * z
        classical_ok = quad_cl <= cl_bound
        rel_done = i < relation_instances
        rel_lhs, rel_maxp, rel_ratio = 0.0, 0, 0.0
        if rel_done:
            rsub = rng.spawn(7, i)
            rinst = sieve.LsInstance(relation_q, relation_n, 0,
                                     bilinear.unit_phases(rsub, relation_n))
            rel = sieve.ls_relation_check(rinst)
            rel_lhs, rel_maxp = rel.lhs, rel.rhs_max_P
            rel_ratio = rel.lhs / (rinst.Z * max(1, rel.rhs_max_P))
        failures += not classical_ok
        max_ratio = max(max_ratio, ratio_refined)
        rows.append({"instance": i, "q": q, "n": n, "znorm": z,
                     "quad_sq": quad_sq, "bound_original": bounds.original,
                     "bound_refined": bounds.refined,
                     "bound_conjectured": bounds.conjectured,
                     "ratio_refined": ratio_refined, "quad_classical": quad_cl,
                     "classical_bound": cl_bound, "classical_ok": classical_ok,
                     "rel_done": rel_done, "rel_lhs": rel_lhs,
                     "rel_maxp": rel_maxp, "rel_ratio": rel_ratio,
                     "status": _status(classical_ok)})
    rows.sort(key=lambda row: row["instance"])
    return columns, rows, failures, max_ratio


def _squarefree_window(qv: int) -> list[int]:
    lo = max(3, math.ceil(qv**0.6))
    hi = max(lo, math.floor(qv**0.9))
    out = []
    for r in range(lo | 1, hi + 1, 2):
        if arith.factorize(r).is_squarefree:
            out.append(r)
    return out


def _run_thm3(grid: _Grid, rng: SplitMix64, threads: int):
    q_list = grid.int_list("q_list", (16, 24, 32, 48, 64))
    r_per_q = grid.int("r_per_q", 2, lo=1)
    b_per_r = grid.int("b_per_r", 2, lo=1)
    gamma = grid.float("gamma", 0.25, lo=0.0)
    ratio_cap = grid.float("ratio_cap", 100.0, lo=0.0)
    zgrid = grid.choice("zgrid", "breakpoints", ("endpoints", "breakpoints"))
    delta_key = grid.fraction("delta", None)
    columns = ["q", "r", "s0", "s1", "b", "z", "count", "bound", "ratio",
               "q716", "lem41", "pl_L", "pl_M", "pl_H", "pl_valid", "status"]
    rows, failures, max_ratio = [], 0, 0.0
    for qv in q_list:
        if qv < 4:
            raise ConfigError(f"{grid._loc('q_list')}: q_list entries must be >= 4")
        window = _squarefree_window(qv)
        if not window:
            continue
        sub = rng.spawn(8, qv)
        picks = sorted({window[sub.randrange(len(window))]
                        for _ in range(4 * r_per_q)})[:r_per_q]
        for r in picks:
            rm = arith.factorize(r)
            delta = delta_key if delta_key is not None else Fraction(1, qv**3)
            if delta > Fraction(1, r * r):
                delta = Fraction(1, r * r)
            bound = sieve.thm3_bound(qv, rm)
            pl = sieve.params_pipeline(qv, rm, gamma)
            bs: set[int] = set()
            for _ in range(8 * b_per_r):
                cand = sub.randint(1, r - 1) if r > 1 else 1
                if math.gcd(2 * cand, r) == 1:
                    bs.add(cand)
                if len(bs) >= b_per_r:
                    break
            for b in sorted(bs):
                if zgrid == "breakpoints":
                    zs = sieve.z_breakpoints(qv, b, r, delta)
                else:
                    zs = sorted(set(sieve.z_range(delta, r)))
                for z in zs:
                    query = sieve.FareyQuery(qv, delta, b=b, r=rm, z=z)
                    count = sieve.farey_count(query)
                    ratio = count / bound
                    lem = sieve.lemma41_bound(qv, qv**3, r, float(z), float(delta))
                    ok = ratio <= ratio_cap
                    failures += not ok
                    max_ratio = max(max_ratio, ratio)
                    rows.append({"q": qv, "r": r, "s0": rm.s0, "s1": rm.s1,
                                 "b": b, "z": float(z), "count": count,
                                 "bound": bound, "ratio": ratio,
                                 "q716": count / qv**0.4375, "lem41": lem,
                                 "pl_L": pl.L, "pl_M": pl.M, "pl_H": pl.H,
                                 "pl_valid": pl.valid,
                                 "status": _status(ok)})
    rows.sort(key=lambda row: (row["q"], row["r"], row["b"], row["z"]))
    return columns, rows, failures, max_ratio


_RUNNERS = {
    "gauss-verify": (_run_gauss, ("c_min", "c_max", "samples")),
    "sqrt-verify": (_run_sqrt, ("r_min", "r_max", "samples")),
    "expsum-verify": (_run_expsum, ("tuples", "r2_max", "p", "m", "cochrane_tuples")),
    "bilinear-sweep": (_run_bilinear, ("cases", "r_min", "r_max", "l_max",
                                       "m_max", "h_energy_max", "ratio_cap")),
    "farey-count": (_run_farey, ("q", "delta", "alpha", "b", "r", "z",
                                 "breakpoints", "n")),
    "sieve-sweep": (_run_sieve, ("q", "n", "instances", "m_offset",
                                 "relation_instances", "relation_q",
                                 "relation_n")),
    "thm3-sweep": (_run_thm3, ("q_list", "r_per_q", "b_per_r", "gamma",
                               "ratio_cap", "zgrid", "delta")),
}


def run(config: ExperimentConfig) -> int:
    """Execute one configured experiment; returns the exit status.

    ConfigError propagates for the caller to map to exit 2; OSError and
    OversizeError propagate for exit 3.
    """
    if config.command not in _RUNNERS:
        known = " ".join(sorted(_RUNNERS))
        raise ConfigError(f"unknown command {config.command!r} (expected one of: {known})")
    runner, allowed = _RUNNERS[config.command]
    grid = _Grid(config, {k: "" for k in allowed})
    threads = config.threads if config.threads else (os.cpu_count() or 1)
    rng = SplitMix64(config.seed)
    columns, rows, failures, max_ratio = runner(grid, rng, threads)
    out = config.out or f"{config.command}.{config.format}"
    _write_report(out, config.format, config.command, config.seed, columns, rows)
    print(f"{config.command}: rows={len(rows)} pass={len(rows) - failures}"
          f" fail={failures} max_ratio={_fmt(max_ratio)} out={out}")
    return EXIT_MATH if failures else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        config = _build_config(args)
    except _HelpRequested:
        print(_USAGE, end="")
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OversizeError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_ENV
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_ENV
