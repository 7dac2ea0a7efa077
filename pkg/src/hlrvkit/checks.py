"""A quick, seeded invariant suite shared by the ``check`` command."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List

from .braidwalk import (BraidWord, braid_matrix, cell_sample, enumerate_walks, mat_mul,
                        mumon_check, walk_of_point)
from .charvar import CharVarSpec, c_from_f, cell_decomposition, duality_check, e_coefficients, f_from_c, hlrv
from .exact import MPoly, RatFunc
from .macdonald import kostka_qt, macdonald_P, macdonald_P_oracle
from .partitions import conjugate, partitions_of
from .symfunc import DiagonalSeries, SymSeries, divisors, exp_pleth, log_pleth, mobius


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _rand_frac(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 6))


def _rand_ratfunc(rng: random.Random) -> RatFunc:
    num = MPoly(("q", "t"), {(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(-3, 3) for _ in range(2)})
    den = MPoly(("q", "t"), {(0, 0): 1, (rng.randint(0, 2), rng.randint(1, 2)): rng.choice((-1, 1))})
    return RatFunc(num, den)


def check_field_axioms(rng: random.Random) -> CheckResult:
    for _ in range(10):
        a, b, c = (_rand_ratfunc(rng) for _ in range(3))
        if (a + b) * c != a * c + b * c or (a * b) * c != a * (b * c):
            return CheckResult("rational-function field axioms", False, f"{a}, {b}, {c}")
        if a and a * a.inverse() != RatFunc(1):
            return CheckResult("rational-function field axioms", False, f"inverse of {a}")
    return CheckResult("rational-function field axioms", True)


def check_braid_relations(rng: random.Random) -> CheckResult:
    for _ in range(30):
        n = rng.randint(3, 5)
        i = rng.randint(1, n - 2)
        e1, e2, e3 = (_rand_frac(rng) for _ in range(3))
        lhs = mat_mul(mat_mul(braid_matrix(i, e1, n), braid_matrix(i + 1, e2, n)), braid_matrix(i, e3, n))
        rhs = mat_mul(mat_mul(braid_matrix(i + 1, e3, n), braid_matrix(i, e2 - e3 * e1, n)),
                      braid_matrix(i + 1, e1, n))
        if lhs != rhs:
            return CheckResult("braid relations", False, f"n={n}, i={i}, ε=({e1},{e2},{e3})")
    return CheckResult("braid relations", True)


def check_cell_round_trip(rng: random.Random) -> CheckResult:
    for word in ((1, 1, 1, 1), (1,) * 6):
        beta = BraidWord(2, word)
        for walk in enumerate_walks(beta):
            for _ in range(5):
                coords = {m: _rand_frac(rng) or Fraction(1) for m in walk.stay}
                coords.update({m: _rand_frac(rng) for m in walk.up})
                eps = cell_sample(beta, walk, coords)
                if walk_of_point(beta, eps) != walk or not mumon_check(beta, walk, coords):
                    return CheckResult("cell sampling and μmon", False, f"{word}: {walk.labels()}")
    return CheckResult("cell sampling and μmon", True)


def check_macdonald(rng: random.Random) -> CheckResult:
    for n in range(1, 4):
        for lam in partitions_of(n):
            if macdonald_P(lam) != macdonald_P_oracle(lam):
                return CheckResult("Macdonald tableau formula vs Gram–Schmidt", False, str(list(lam)))
    return CheckResult("Macdonald tableau formula vs Gram–Schmidt", True)


def check_kostka_duality(rng: random.Random) -> CheckResult:
    for n in range(1, 4):
        for mu in partitions_of(n):
            K, Kd = kostka_qt(mu), kostka_qt(conjugate(mu))
            for lam, c in K.items():
                swapped = c.monomial_subs({"q": ("t", 1), "t": ("q", 1)})
                if Kd.get(lam) != swapped:
                    return CheckResult("(q,t)-Kostka duality", False, f"{list(lam)}, {list(mu)}")
    return CheckResult("(q,t)-Kostka duality", True)


def check_exp_log(rng: random.Random) -> CheckResult:
    for _ in range(5):
        k, N = rng.randint(1, 2), rng.randint(1, 3)
        comps = [SymSeries.zero(k, N)]
        for m in range(1, N + 1):
            parts = [p for p in partitions_of(m)]
            terms = {tuple(rng.choice(parts) for _ in range(k)): _rand_frac(rng) for _ in range(2)}
            comps.append(SymSeries(k, N, terms))
        v = DiagonalSeries(comps)
        if log_pleth(exp_pleth(v)) != v:
            return CheckResult("Exp/Log inverse", False, repr(v))
    if any(sum(mobius(d) for d in divisors(n)) != (n == 1) for n in range(1, 101)):
        return CheckResult("Exp/Log inverse", False, "Möbius sum")
    return CheckResult("Exp/Log inverse", True)


def check_examples(rng: random.Random) -> CheckResult:
    for mu, expected, cells in (("1,1;1,1;1,1;1,1", 4, 7), ("1,1,1;1,1,1;1,1,1", 6, 9)):
        spec = CharVarSpec.parse(0, mu)
        res = hlrv(spec)
        dec = cell_decomposition(spec)
        if not res.ok or res.grid.c != {(2, 0): 1, (0, 0): expected, (0, 2): 1}:
            return CheckResult("worked examples", False, f"ℍ for {mu}: {res.value_neg}")
        if len(dec.cells) != cells or dec.e_polynomial() != MPoly(("q",), {(2,): 1, (1,): expected, (0,): 1}):
            return CheckResult("worked examples", False, f"cells for {mu}")
        if not duality_check(res.grid) or f_from_c(e_coefficients(res.grid), res.d) != dec.f:
            return CheckResult("worked examples", False, f"f_j for {mu}")
    return CheckResult("worked examples", True)


def check_f_round_trip(rng: random.Random) -> CheckResult:
    for _ in range(20):
        d = 2 * rng.randint(1, 5)
        f = [1] + [rng.randint(0, 20) for _ in range(d // 2)]
        c = c_from_f(f, d)
        if f_from_c(c, d) != f or c_from_f(f_from_c(c, d), d) != c:
            return CheckResult("f_j ↔ c_ℓ round trip", False, f"d={d}, f={f}")
    return CheckResult("f_j ↔ c_ℓ round trip", True)


CHECKS: List[Callable[[random.Random], CheckResult]] = [
    check_field_axioms, check_braid_relations, check_cell_round_trip, check_macdonald,
    check_kostka_duality, check_exp_log, check_f_round_trip, check_examples,
]


def run_checks(seed: int) -> List[CheckResult]:
    out = []
    for fn in CHECKS:
        rng = random.Random(seed)
        try:
            out.append(fn(rng))
        except Exception as exc:   # report, do not abort the suite
            out.append(CheckResult(fn.__name__, False, f"{type(exc).__name__}: {exc}"))
    return out
