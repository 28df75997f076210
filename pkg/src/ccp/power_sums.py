"""Sums of powers of subset probabilities.

``power_sum_bruteforce`` enumerates subsets and is the reference every closed
form is checked against.  The ``relation*_closed`` functions are the
popularity-independent (or moment-only) closed forms for exponents 1 to 3.
"""

from __future__ import annotations

import contextlib
import contextvars
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import _kernels
from .errors import EnumerationTooLarge, IndexOutOfRange, RangeError
from .numerics import Scalar, binomial
from .popularity import Popularity

DEFAULT_GUARD = 1 << 28

_guard: contextvars.ContextVar[int] = contextvars.ContextVar("enumeration_guard", default=DEFAULT_GUARD)


def current_guard() -> int:
    return _guard.get()


@contextlib.contextmanager
def enumeration_guard(limit: int):
    """Temporarily change the largest subset count a single enumeration may visit."""
    token = _guard.set(int(limit))
    try:
        yield
    finally:
        _guard.reset(token)


def check_guard(count: int, guard: int | None = None) -> None:
    limit = current_guard() if guard is None else guard
    if count > limit:
        raise EnumerationTooLarge(f"enumeration of {count} subsets exceeds guard {limit}")


def _check_jk(n: int, j: int, k: int) -> None:
    if not 0 <= j <= n:
        raise RangeError(f"subset size {j} not in 0..{n}")
    if k < 0:
        raise RangeError(f"exponent {k} must be >= 0")


def _check_item(n: int, l: int) -> None:
    if not 1 <= l <= n:
        raise IndexOutOfRange(f"item {l} not in 1..{n}")


def _exact_sum(nums, den, j, k, offset=0, tail=False) -> Fraction:
    # Each P_J is (offset + sum of nums) / den; accumulate integers, divide once.
    total = 0
    if tail:
        for J in combinations(nums, j):
            a = offset + sum(J)
            total += a**k * (den - a)
        return Fraction(total, den ** (k + 1))
    for J in combinations(nums, j):
        total += (offset + sum(J)) ** k
    return Fraction(total, den**k)


def _sum(pop: Popularity, j: int, k: int, skip: int | None = None, lead: int | None = None, tail: bool = False) -> Scalar:
    """Enumerate ``|J| = j`` subsets of the items other than ``skip``, each with ``lead`` added."""
    if pop.exact:
        nums, den = pop.scaled
        offset = 0
        if skip is not None:
            nums = nums[: skip - 1] + nums[skip:]
        if lead is not None:
            offset = pop.scaled[0][lead - 1]
        return _exact_sum(nums, den, j, k, offset, tail)
    p = pop.array
    offset = 0.0
    if skip is not None:
        p = np.delete(p, skip - 1)
    if lead is not None:
        offset = float(pop.array[lead - 1])
    return _kernels.power_sum(p, j, k, offset, tail)


def power_sum_bruteforce(pop: Popularity, j: int, k: int, guard: int | None = None) -> Scalar:
    """``sum_{|J|=j} P_J**k`` by direct enumeration (``P_emptyset**0 == 1``)."""
    _check_jk(pop.n, j, k)
    check_guard(binomial(pop.n, j), guard)
    return _sum(pop, j, k)


def tail_sum_bruteforce(pop: Popularity, j: int, k: int, guard: int | None = None) -> Scalar:
    """``sum_{|J|=j} P_J**k (1 - P_J)`` by direct enumeration."""
    _check_jk(pop.n, j, k)
    check_guard(binomial(pop.n, j), guard)
    return _sum(pop, j, k, tail=True)


def power_sum_conditioned(pop: Popularity, l: int, j: int, k: int, mode: str = "include", guard: int | None = None) -> Scalar:
    """Power sum restricted to subsets that contain (``include``) or omit (``exclude``) item ``l``."""
    _check_jk(pop.n, j, k)
    _check_item(pop.n, l)
    if mode == "include":
        if j == 0:
            return pop.backend.zero()
        check_guard(binomial(pop.n - 1, j - 1), guard)
        return _sum(pop, j - 1, k, skip=l, lead=l)
    if mode == "exclude":
        if j == pop.n:
            return pop.backend.zero()
        check_guard(binomial(pop.n - 1, j), guard)
        return _sum(pop, j, k, skip=l)
    raise ValueError(f"mode must be 'include' or 'exclude', got {mode!r}")


def relation1_closed(n: int, j: int) -> int:
    """``sum_{|J|=j} P_J``, identical for every popularity on ``n`` items."""
    if not 0 <= j <= n:
        raise RangeError(f"subset size {j} not in 0..{n}")
    return binomial(n - 1, j - 1)


def relation2_closed(pop: Popularity, l: int, j: int) -> Scalar:
    """``sum_{|J|=j, l not in J} P_J = (1 - p_l) C(n-2, j-1)``."""
    if not 1 <= j <= pop.n - 1:
        raise RangeError(f"subset size {j} not in 1..{pop.n - 1}")
    _check_item(pop.n, l)
    return (1 - pop[l]) * binomial(pop.n - 2, j - 1)


def relation4_closed(pop: Popularity, j: int) -> Scalar:
    """``sum_{|J|=j} P_J**2``."""
    n = pop.n
    if not 0 <= j <= n:
        raise RangeError(f"subset size {j} not in 0..{n}")
    return binomial(n - 2, j - 2) + binomial(n - 2, j - 1) * pop.moment(2)


def relation6_closed(pop: Popularity, l: int, j: int) -> Scalar:
    """``sum_{|J|=j, l in J} P_J**2`` (needs ``n >= 3``)."""
    n = pop.n
    if n < 3:
        raise RangeError("closed form needs at least 3 items")
    if not 1 <= j <= n:
        raise RangeError(f"subset size {j} not in 1..{n}")
    _check_item(n, l)
    p = pop[l]
    b1, b2, b3 = binomial(n - 3, j - 1), binomial(n - 3, j - 2), binomial(n - 3, j - 3)
    return p * p * (b1 - b2) + 2 * p * b2 + b3 + b2 * pop.moment(2)


def relation7_closed(pop: Popularity, j: int) -> Scalar:
    """``sum_{|J|=j} P_J**3`` (needs ``n >= 3``)."""
    n = pop.n
    if n < 3:
        raise RangeError("closed form needs at least 3 items")
    if not 0 <= j <= n:
        raise RangeError(f"subset size {j} not in 0..{n}")
    b1, b2, b3 = binomial(n - 3, j - 1), binomial(n - 3, j - 2), binomial(n - 3, j - 3)
    return pop.moment(3) * (b1 - b2) + 3 * pop.moment(2) * b2 + b3
