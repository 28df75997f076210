"""Binomial-basis decomposition of subset power sums.

For ``0 < k < n`` every power sum splits as

    sum_{|J|=j} P_J**k = sum_{u=1..k} C(n-k, j-u) * alpha[k, u]

with weights that do not depend on ``j``.  This module builds the weight
tables (general popularity and the uniform Stirling form), the ``eta``
coefficients that rewrite a size-``j`` sum through the sizes ``1..k``, and
the fast evaluator built on them.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import CancellationWarning, RangeError
from .numerics import Backend, Scalar, binomial, factorial, stirling2
from .popularity import Popularity
from .power_sums import check_guard, power_sum_bruteforce

CONDITION_WARN = 1e12


@dataclass(frozen=True)
class AlphaTable:
    n: int
    k: int
    weights: tuple[Scalar, ...]
    provenance: str
    condition: float = 1.0

    def __getitem__(self, u: int) -> Scalar:
        """Weight ``alpha[k, u]`` for ``u`` in ``1..k``."""
        if not 1 <= u <= self.k:
            raise RangeError(f"u={u} not in 1..{self.k}")
        return self.weights[u - 1]

    @property
    def backend(self) -> Backend:
        return Backend.of(self.weights[0])


def _check_k(n: int, k: int) -> None:
    if not 1 <= k < n:
        raise RangeError(f"exponent {k} not in 1..{n - 1}")


@lru_cache(maxsize=256)
def _small_sums(pop: Popularity, k: int) -> tuple[Scalar, ...]:
    return tuple(power_sum_bruteforce(pop, q, k) for q in range(1, k + 1))


def small_sums(pop: Popularity, k: int) -> tuple[Scalar, ...]:
    """``sum_{|J|=q} P_J**k`` for ``q = 1..k``, memoized per ``(pop, k)``."""
    check_guard(sum(binomial(pop.n, q) for q in range(1, k + 1)))
    return _small_sums(pop, k)


def clear_cache() -> None:
    _small_sums.cache_clear()


def _condition(terms, result) -> float:
    big = max((abs(float(t)) for t in terms), default=0.0)
    if big == 0.0:
        return 1.0
    r = abs(float(result))
    return float("inf") if r == 0.0 else big / r


def alpha_general(pop: Popularity, k: int) -> AlphaTable:
    """Weights for an arbitrary popularity from the ``k`` small power sums.

    ``alpha[k, v] = sum_{q=1..v} (-1)**(v-q) C(n-k-1+v-q, v-q) S_q`` where
    ``S_q = sum_{|J|=q} P_J**k``.  Float tables carry a cancellation estimate
    and warn when it exceeds ``CONDITION_WARN``.
    """
    n = pop.n
    _check_k(n, k)
    sums = small_sums(pop, k)
    backend = pop.backend
    weights = []
    cond = 1.0
    for v in range(1, k + 1):
        terms = [
            (-1) ** (v - q) * binomial(n - k - 1 + v - q, v - q) * sums[q - 1]
            for q in range(1, v + 1)
        ]
        value = backend.total(terms)
        weights.append(value)
        cond = max(cond, _condition(terms, value))
    if backend is Backend.FLOAT and cond > CONDITION_WARN:
        warnings.warn(f"alpha table n={n} k={k}: condition estimate {cond:.3g}", CancellationWarning, stacklevel=2)
    return AlphaTable(n, k, tuple(weights), "general", cond)


def alpha_uniform(n: int, k: int, backend: Backend | str = Backend.EXACT) -> AlphaTable:
    """Weights for the uniform popularity on ``n`` items via Stirling numbers."""
    _check_k(n, k)
    backend = Backend(backend)
    scale = Fraction(1, n**k)
    weights = []
    for u in range(1, k + 1):
        acc = sum(stirling2(k, i) * factorial(i) * binomial(k - i, u - i) * binomial(n, i) for i in range(1, u + 1))
        value = acc * scale
        weights.append(value if backend is Backend.EXACT else float(value))
    return AlphaTable(n, k, tuple(weights), "uniform")


def theorem1_eval(table: AlphaTable, j: int) -> Scalar:
    """Evaluate ``sum_u C(n-k, j-u) alpha[k, u]``."""
    n, k = table.n, table.k
    if not 0 <= j <= n:
        raise RangeError(f"subset size {j} not in 0..{n}")
    return table.backend.total(binomial(n - k, j - u) * table[u] for u in range(1, k + 1))


def eta(n: int, k: int, j: int, q: int, backend: Backend | str = Backend.EXACT) -> Scalar:
    """Coefficient of ``sum_{|J|=q} P_J**k`` in the expansion of the size-``j`` sum."""
    if not 1 <= k < n:
        raise RangeError(f"exponent {k} not in 1..{n - 1}")
    if not 1 <= q <= k:
        raise RangeError(f"q={q} not in 1..{k}")
    if not 0 <= j <= n:
        raise RangeError(f"subset size {j} not in 0..{n}")
    if q < j:
        sign = -1 if (k - q) % 2 else 1
        value = Fraction(sign * binomial(n - k, j - k) * binomial(n - q, n - k) * (j - k), j - q)
    else:
        value = Fraction(sum(
            binomial(n - k, j - u) * (-1) ** (u - q) * binomial(n - k - 1 + u - q, u - q)
            for u in range(q, k + 1)
        ))
    return value if Backend(backend) is Backend.EXACT else float(value)


def fast_coefficients(n: int, j: int, k: int) -> tuple[Fraction, ...]:
    """Exact multipliers of ``S_1..S_k`` in the fast evaluator (``0 < k < j <= n``)."""
    lead = binomial(n - k, j - k) * (j - k)
    return tuple(
        Fraction((-1) ** (k - q) * lead * binomial(n - q, n - k), j - q) for q in range(1, k + 1)
    )


def power_sum_fast(pop: Popularity, j: int, k: int) -> Scalar:
    """``sum_{|J|=j} P_J**k`` from the ``k`` small sums; valid for ``0 < k < j <= n``.

    Only ``sum_{q<=k} C(n, q)`` subsets are visited instead of ``C(n, j)``.
    """
    n = pop.n
    if not (0 < k < j <= n):
        raise RangeError(f"fast path needs 0 < k < j <= n, got j={j}, k={k}, n={n}")
    sums = small_sums(pop, k)
    coeffs = fast_coefficients(n, j, k)
    if pop.exact:
        return sum((c * s for c, s in zip(coeffs, sums)), Fraction(0))
    return Backend.FLOAT.total(float(c) * s for c, s in zip(coeffs, sums))


def power_sum_uniform(n: int, j: int, k: int, backend: Backend | str = Backend.EXACT) -> Scalar:
    """``C(n, j) (j/n)**k``, the power sum of the uniform popularity."""
    if not 0 <= j <= n:
        raise RangeError(f"subset size {j} not in 0..{n}")
    if Backend(backend) is Backend.EXACT:
        return binomial(n, j) * Fraction(j, n) ** k
    return binomial(n, j) * (j / n) ** k


def choose_method(pop: Popularity, j: int, k: int) -> str:
    if pop.is_uniform:
        return "uniform"
    if 0 < k < j:
        return "fast"
    return "brute"


def power_sum(pop: Popularity, j: int, k: int, method: str = "auto") -> Scalar:
    """Power sum with the evaluation route picked per query.

    ``auto`` takes the uniform closed form for uniform popularities, the fast
    path when ``0 < k < j``, and enumeration otherwise.  ``brute``, ``fast``
    and ``uniform`` force one route.
    """
    if method == "auto":
        method = choose_method(pop, j, k)
    if method == "brute":
        return power_sum_bruteforce(pop, j, k)
    if method == "fast":
        return power_sum_fast(pop, j, k)
    if method == "uniform":
        if not pop.is_uniform:
            raise RangeError("uniform closed form requested for a non-uniform popularity")
        return power_sum_uniform(pop.n, j, k, pop.backend)
    raise ValueError(f"unknown method {method!r}")


def corollary1_sum(pop: Popularity, k: int) -> Scalar:
    """``sum_{J} (-1)**|J| P_J**k`` over all subsets; zero whenever ``0 <= k < n``."""
    n = pop.n
    if not 0 <= k < n:
        raise RangeError(f"exponent {k} not in 0..{n - 1}")
    return pop.backend.total((-1) ** j * power_sum_bruteforce(pop, j, k) for j in range(n + 1))


def subset_count_ratio(n: int, j: int, k: int) -> Fraction:
    """Subsets visited by enumeration divided by those visited by the fast path."""
    return Fraction(binomial(n, j), sum(binomial(n, q) for q in range(1, k + 1)))
