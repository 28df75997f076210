"""Exact identity-verification suite behind ``ccp verify``.

Every check runs in the exact backend over seeded random rational
popularities and stops at the first violation, recording both sides.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

from . import decomposition as dec
from . import power_sums as ps
from . import waiting_time as wt
from .numerics import binomial
from .popularity import Popularity, random_rational, uniform


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failure: dict | None = None

    @property
    def passed(self) -> bool:
        return self.failure is None


@dataclass
class Report:
    seed: int
    n_max: int
    trials: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


Case = tuple[dict, object, object]


def _pops(n_max: int, trials: int, seed: int, n_min: int = 2) -> Iterator[Popularity]:
    rng = random.Random(seed)
    for n in range(n_min, n_max + 1):
        for _ in range(trials):
            yield random_rational(n, rng)


def _str(v) -> str:
    return str(v)


def weight_grid(n_max: int) -> Iterator[Case]:
    for n in range(1, n_max + 1):
        for c in range(1, n + 1):
            for k in range(c):
                for u in range(k + 1):
                    yield {"n": n, "c": c, "k": k, "u": u}, wt.identity_appendix1(n, c, k, u), int(u == k)


def relation1(pops) -> Iterator[Case]:
    for pop in pops:
        n = pop.n
        for j in range(n + 1):
            yield {"pop": pop, "j": j}, ps.power_sum_bruteforce(pop, j, 1), ps.relation1_closed(n, j)
        for j in range(n):
            lhs = ps.power_sum_bruteforce(pop, j + 1, 1) + ps.power_sum_bruteforce(pop, j, 1)
            yield {"pop": pop, "j": j, "form": "consecutive"}, lhs, binomial(n, j)
            yield {"pop": pop, "j": j, "form": "complement"}, ps.power_sum_bruteforce(pop, n - j, 1), ps.power_sum_bruteforce(pop, j + 1, 1)


def relation2(pops) -> Iterator[Case]:
    for pop in pops:
        for l in range(1, pop.n + 1):
            for j in range(1, pop.n):
                yield {"pop": pop, "l": l, "j": j}, ps.power_sum_conditioned(pop, l, j, 1, "exclude"), ps.relation2_closed(pop, l, j)


def relation3(pops, k_max: int = 4) -> Iterator[Case]:
    for pop in pops:
        for j in range(pop.n + 1):
            for k in range(k_max + 1):
                lhs = ps.power_sum_bruteforce(pop, j, k) - ps.power_sum_bruteforce(pop, j, k + 1)
                rhs = sum((p * ps.power_sum_conditioned(pop, l, j, k, "exclude") for l, p in enumerate(pop.probs, 1)), Fraction(0))
                yield {"pop": pop, "j": j, "k": k}, lhs, rhs


def abs_lemma(pops, k_max: int = 4) -> Iterator[Case]:
    for pop in pops:
        for j in range(1, pop.n + 1):
            for k in range(k_max + 1):
                rhs = sum((p * ps.power_sum_conditioned(pop, l, j, k, "include") for l, p in enumerate(pop.probs, 1)), Fraction(0))
                yield {"pop": pop, "j": j, "k": k}, ps.power_sum_bruteforce(pop, j, k + 1), rhs


def relation4(pops) -> Iterator[Case]:
    for pop in pops:
        for j in range(pop.n + 1):
            yield {"pop": pop, "j": j}, ps.power_sum_bruteforce(pop, j, 2), ps.relation4_closed(pop, j)


def relation5(pops) -> Iterator[Case]:
    for pop in pops:
        n = pop.n
        m2 = pop.moment(2)
        for j in range(n + 1):
            lhs = ps.power_sum_bruteforce(pop, j, 1) - ps.power_sum_bruteforce(pop, j, 2)
            yield {"pop": pop, "j": j}, lhs, binomial(n - 2, j - 1) * (1 - m2)
            if j < n:
                rhs = ps.power_sum_bruteforce(pop, j + 1, 2) - m2 * ps.power_sum_bruteforce(pop, j + 1, 1)
                yield {"pop": pop, "j": j, "form": "shift"}, lhs, rhs


def relation6(pops) -> Iterator[Case]:
    for pop in pops:
        if pop.n < 3:
            continue
        for l in range(1, pop.n + 1):
            for j in range(1, pop.n + 1):
                yield {"pop": pop, "l": l, "j": j}, ps.power_sum_conditioned(pop, l, j, 2, "include"), ps.relation6_closed(pop, l, j)


def relation7(pops) -> Iterator[Case]:
    for pop in pops:
        if pop.n < 3:
            continue
        for j in range(pop.n + 1):
            yield {"pop": pop, "j": j}, ps.power_sum_bruteforce(pop, j, 3), ps.relation7_closed(pop, j)


def uniform_binomial_identities(n_max: int) -> Iterator[Case]:
    for n in range(3, n_max + 1):
        pop = uniform(n)
        for j in range(n + 1):
            yield {"n": n, "j": j, "k": 2}, ps.relation4_closed(pop, j), binomial(n, j) * Fraction(j, n) ** 2
            yield {"n": n, "j": j, "k": 3}, ps.relation7_closed(pop, j), binomial(n, j) * Fraction(j, n) ** 3


def decomposition(pops) -> Iterator[Case]:
    for pop in pops:
        for k in range(1, pop.n):
            table = dec.alpha_general(pop, k)
            yield {"pop": pop, "k": k, "check": "alpha_kk"}, table[k], 1
            for j in range(pop.n + 1):
                yield {"pop": pop, "k": k, "j": j}, dec.theorem1_eval(table, j), ps.power_sum_bruteforce(pop, j, k)


def alternating_zero(pops) -> Iterator[Case]:
    for pop in pops:
        for k in range(pop.n):
            yield {"pop": pop, "k": k}, dec.corollary1_sum(pop, k), 0


def below_c(pops) -> Iterator[Case]:
    for pop in pops:
        for c in range(1, pop.n + 1):
            for k in range(c):
                yield {"pop": pop, "c": c, "k": k, "quantity": "ccdf"}, wt.ccdf(pop, c, k, method="brute"), 1
                if k > 0:
                    yield {"pop": pop, "c": c, "k": k, "quantity": "pdf"}, wt.pdf(pop, c, k, method="brute"), 0


def alpha_agreement(n_max: int) -> Iterator[Case]:
    for n in range(2, n_max + 1):
        pop = uniform(n)
        for k in range(1, n):
            yield {"n": n, "k": k}, dec.alpha_general(pop, k).weights, dec.alpha_uniform(n, k).weights


def eta_partition(pops) -> Iterator[Case]:
    for pop in pops:
        n = pop.n
        for k in range(1, n):
            small = [ps.power_sum_bruteforce(pop, q, k) for q in range(1, k + 1)]
            for j in range(k + 1, n + 1):
                rhs = sum((dec.eta(n, k, j, q) * small[q - 1] for q in range(1, k + 1)), Fraction(0))
                yield {"pop": pop, "k": k, "j": j}, ps.power_sum_bruteforce(pop, j, k), rhs


def fast_path(pops) -> Iterator[Case]:
    for pop in pops:
        for k in range(1, pop.n):
            for j in range(k + 1, pop.n + 1):
                yield {"pop": pop, "k": k, "j": j}, dec.power_sum_fast(pop, j, k), ps.power_sum_bruteforce(pop, j, k)


def run_check(name: str, cases: Iterator[Case]) -> CheckResult:
    result = CheckResult(name)
    for inputs, lhs, rhs in cases:
        result.cases += 1
        if lhs != rhs:
            result.failure = {
                "identity": name,
                "inputs": {key: _str(v) for key, v in inputs.items()},
                "lhs": _str(lhs),
                "rhs": _str(rhs),
            }
            break
    return result


def suites(n_max: int, trials: int, seed: int, uniform_n_max: int = 20, alpha_n_max: int = 12) -> list[tuple[str, Callable[[], Iterator[Case]]]]:
    def pops(offset: int):
        return _pops(n_max, trials, seed + offset)

    return [
        ("weight_grid", lambda: weight_grid(uniform_n_max)),
        ("relation1", lambda: relation1(pops(1))),
        ("relation2", lambda: relation2(pops(2))),
        ("relation3", lambda: relation3(pops(3))),
        ("abs_lemma", lambda: abs_lemma(pops(4))),
        ("relation4", lambda: relation4(pops(5))),
        ("relation5", lambda: relation5(pops(6))),
        ("relation6", lambda: relation6(pops(7))),
        ("relation7", lambda: relation7(pops(8))),
        ("uniform_binomial_identities", lambda: uniform_binomial_identities(uniform_n_max)),
        ("decomposition", lambda: decomposition(pops(9))),
        ("alternating_zero", lambda: alternating_zero(pops(10))),
        ("below_c", lambda: below_c(pops(11))),
        ("alpha_agreement", lambda: alpha_agreement(alpha_n_max)),
        ("eta_partition", lambda: eta_partition(pops(12))),
        ("fast_path", lambda: fast_path(pops(13))),
    ]


def run(n_max: int = 8, trials: int = 50, seed: int = 0, only: list[str] | None = None) -> Report:
    report = Report(seed, n_max, trials)
    for name, make in suites(n_max, trials, seed):
        if only and name not in only:
            continue
        report.checks.append(run_check(name, make()))
    return report
