"""Distribution of the coupon-collector waiting time ``T_c``.

``T_c`` is the number of independent draws from a popularity needed to see
``c`` distinct items.  All of pdf, CDF and CCDF are alternating sums over
subset sizes ``j < c`` weighted by ``C(n-j-1, n-c)``.
"""

from __future__ import annotations

import math
import sys
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .decomposition import CONDITION_WARN, power_sum
from .errors import CancellationWarning, RangeError
from .numerics import Backend, Scalar, binomial, factorial, stirling2
from .popularity import Popularity
from .power_sums import check_guard, tail_sum_bruteforce

EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class Evaluation:
    """An alternating-sum result with its cancellation diagnostics.

    ``condition`` is the largest term magnitude over the result magnitude;
    ``tolerance`` is an absolute error bound for float evaluations (zero for
    exact ones).
    """

    value: Scalar
    condition: float
    tolerance: float


@dataclass(frozen=True)
class WaitingTimeTable:
    c: int
    rows: tuple[tuple[int, Scalar, Scalar, Scalar], ...]

    def column(self, name: str) -> list[Scalar]:
        col = {"k": 0, "pdf": 1, "cdf": 2, "ccdf": 3}[name]
        return [row[col] for row in self.rows]


def _check_c(pop: Popularity, c: int) -> None:
    if not 1 <= c <= pop.n:
        raise RangeError(f"collection size {c} not in 1..{pop.n}")


def _check_k(k: int) -> None:
    if k < 0:
        raise RangeError(f"trial count {k} must be >= 0")


def _weight(n: int, c: int, j: int) -> int:
    sign = -1 if (c - 1 - j) % 2 else 1
    return sign * binomial(n - j - 1, n - c)


def _diagnose(terms, backend: Backend, extra_ops: int) -> Evaluation:
    value = backend.total(terms)
    mags = [abs(float(t)) for t in terms]
    big = max(mags, default=0.0)
    r = abs(float(value))
    if big == 0.0:
        cond = 1.0
    else:
        cond = float("inf") if r == 0.0 else big / r
    tol = 0.0 if backend is Backend.EXACT else (extra_ops + len(terms) + 4) * EPS * math.fsum(mags)
    return Evaluation(value, cond, tol)


def ccdf_report(pop: Popularity, c: int, k: int, method: str = "auto") -> Evaluation:
    """``Pr[T_c > k]`` plus condition estimate and float error bound."""
    _check_c(pop, c)
    _check_k(k)
    n = pop.n
    terms = [_weight(n, c, j) * power_sum(pop, j, k, method) for j in range(c)]
    ev = _diagnose(terms, pop.backend, k)
    if pop.backend is Backend.FLOAT and ev.condition > CONDITION_WARN:
        warnings.warn(
            f"ccdf n={n} c={c} k={k}: condition estimate {ev.condition:.3g}, error bound {ev.tolerance:.3g}",
            CancellationWarning,
            stacklevel=3,
        )
    return ev


def ccdf(pop: Popularity, c: int, k: int, method: str = "auto") -> Scalar:
    """``Pr[T_c > k]``."""
    return ccdf_report(pop, c, k, method).value


def cdf(pop: Popularity, c: int, k: int, method: str = "auto") -> Scalar:
    """``Pr[T_c <= k]``."""
    return 1 - ccdf_report(pop, c, k, method).value


def pdf(pop: Popularity, c: int, k: int, method: str = "auto") -> Scalar:
    """``Pr[T_c = k]`` from the pdf sum over ``P_J**(k-1) (1 - P_J)``.

    With ``method="brute"`` each subset term is formed directly; the other
    routes split it into two power sums.
    """
    _check_c(pop, c)
    _check_k(k)
    if k == 0:
        return pop.backend.zero()
    n = pop.n
    terms = []
    for j in range(c):
        if method == "brute":
            inner = tail_sum_bruteforce(pop, j, k - 1)
        else:
            inner = power_sum(pop, j, k - 1, method) - power_sum(pop, j, k, method)
        terms.append(_weight(n, c, j) * inner)
    return pop.backend.total(terms)


def pdf_from_ccdf(pop: Popularity, c: int, k: int, method: str = "auto") -> Scalar:
    """``Pr[T_c = k]`` as ``ccdf(k-1) - ccdf(k)``."""
    _check_c(pop, c)
    _check_k(k)
    if k == 0:
        return pop.backend.zero()
    return ccdf(pop, c, k - 1, method) - ccdf(pop, c, k, method)


def default_kmax(n: int, c: int) -> int:
    return max(3 * n, c + 20)


def table(pop: Popularity, c: int, k_max: int | None = None, method: str = "auto") -> WaitingTimeTable:
    _check_c(pop, c)
    if k_max is None:
        k_max = default_kmax(pop.n, c)
    _check_k(k_max)
    rows = []
    for k in range(k_max + 1):
        tail = ccdf(pop, c, k, method)
        rows.append((k, pdf(pop, c, k, method), 1 - tail, tail))
    return WaitingTimeTable(c, tuple(rows))


def pdf_uniform(n: int, c: int, k: int) -> Fraction:
    """Exact ``Pr[T_c = k]`` for the uniform popularity via Stirling numbers."""
    if n < 2:
        raise RangeError(f"need n >= 2, got {n}")
    if not 1 <= c <= n:
        raise RangeError(f"collection size {c} not in 1..{n}")
    if k < 1:
        raise RangeError(f"trial count {k} must be >= 1")
    return Fraction(factorial(n) * stirling2(k - 1, c - 1), factorial(n - c) * n**k)


def min_time_probability(pop: Popularity, c: int) -> Scalar:
    """``Pr[T_c = c] = c! * sum_{|J|=c} prod_{i in J} p_i``."""
    _check_c(pop, c)
    check_guard(binomial(pop.n, c))
    if pop.exact:
        nums, den = pop.scaled
        total = sum(math.prod(J) for J in combinations(nums, c))
        return Fraction(factorial(c) * total, den**c)
    total = math.fsum(math.prod(J) for J in combinations(pop.probs, c))
    return factorial(c) * total


def expectation(pop: Popularity, c: int) -> Scalar:
    """``E[T_c]`` by summing the CCDF as geometric series term by term.

    ``sum_k P_J**k = 1 / (1 - P_J)`` for every ``|J| < c``, so the expectation
    is the CCDF sum with ``P_J**k`` replaced by that reciprocal.
    """
    _check_c(pop, c)
    n = pop.n
    terms = []
    for j in range(c):
        w = _weight(n, c, j)
        if pop.is_uniform:
            inner = binomial(n, j) * (Fraction(n, n - j) if pop.exact else n / (n - j))
        elif pop.exact:
            check_guard(binomial(n, j))
            nums, den = pop.scaled
            inner = sum((Fraction(den, den - sum(J)) for J in combinations(nums, j)), Fraction(0))
        else:
            check_guard(binomial(n, j))
            inner = math.fsum(1.0 / (1.0 - math.fsum(J)) for J in combinations(pop.probs, j))
        terms.append(w * inner)
    return pop.backend.total(terms)


def expectation_partial(pop: Popularity, c: int, k_max: int) -> Scalar:
    """``sum_{k=0..k_max} Pr[T_c > k]``; converges up to ``E[T_c]``."""
    return pop.backend.total(ccdf(pop, c, k) for k in range(k_max + 1))


def identity_appendix1(n: int, c: int, k: int, u: int) -> int:
    """``sum_{i<c} (-1)**(c-1-i) C(n-i-1, n-c) C(n-k, i-u)``: 1 when ``u == k``, else 0."""
    if not (0 <= u <= k < c <= n):
        raise RangeError(f"need 0 <= u <= k < c <= n, got n={n} c={c} k={k} u={u}")
    return sum(_weight(n, c, i) * binomial(n - k, i - u) for i in range(c))
