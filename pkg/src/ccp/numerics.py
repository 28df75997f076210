"""Scalar backends and cached combinatorial primitives.

A *scalar* is either a :class:`fractions.Fraction` (exact backend) or a
Python ``float`` (float backend).  The backend is chosen once, when a
:class:`~ccp.popularity.Popularity` is built, and everything derived from it
inherits that choice.
"""

from __future__ import annotations

import enum
import math
import threading
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Union

from .errors import BackendMismatch, RangeError

Scalar = Union[Fraction, float]


class Backend(str, enum.Enum):
    EXACT = "exact"
    FLOAT = "float"

    @classmethod
    def of(cls, value: Scalar) -> "Backend":
        if isinstance(value, bool):
            raise BackendMismatch(f"not a scalar: {value!r}")
        if isinstance(value, (Fraction, int)):
            return cls.EXACT
        if isinstance(value, float):
            return cls.FLOAT
        raise BackendMismatch(f"not a scalar: {value!r}")

    def convert(self, value) -> Scalar:
        """Lift an integer (or same-backend scalar) into this backend."""
        if self is Backend.EXACT:
            if isinstance(value, float):
                raise BackendMismatch("float value in exact context")
            return Fraction(value)
        if isinstance(value, Fraction):
            raise BackendMismatch("rational value in float context")
        return float(value)

    def zero(self) -> Scalar:
        return Fraction(0) if self is Backend.EXACT else 0.0

    def one(self) -> Scalar:
        return Fraction(1) if self is Backend.EXACT else 1.0

    def total(self, values: Iterable[Scalar]) -> Scalar:
        """Sum in this backend: exact for rationals, ``math.fsum`` for floats."""
        if self is Backend.EXACT:
            return sum(values, Fraction(0))
        return math.fsum(values)


def same_backend(*values: Scalar) -> Backend:
    """Return the common backend of ``values``; raise if they are mixed."""
    backends = {Backend.of(v) for v in values}
    if len(backends) != 1:
        raise BackendMismatch("mixed exact and float scalars")
    return backends.pop()


class BinomialTable:
    """Lazily grown Pascal triangle of exact binomial coefficients.

    Rows are appended under a lock; reads of already-built rows need no lock
    because rows are never mutated once published.
    """

    def __init__(self, n_max: int = 0):
        self._rows: list[tuple[int, ...]] = [(1,)]
        self._lock = threading.Lock()
        self.grow(n_max)

    @property
    def n_max(self) -> int:
        return len(self._rows) - 1

    def grow(self, a: int) -> None:
        if a <= self.n_max:
            return
        with self._lock:
            rows = self._rows
            while len(rows) <= a:
                prev = rows[-1]
                row = (1,) + tuple(prev[i - 1] + prev[i] for i in range(1, len(prev))) + (1,)
                rows.append(row)

    def row(self, a: int) -> tuple[int, ...]:
        self.grow(a)
        return self._rows[a]

    def __call__(self, a: int, b: int) -> int:
        if a < 0 or b < 0 or b > a:
            return 0
        return self.row(a)[b]


_BINOMIALS = BinomialTable()


def binomial(a: int, b: int) -> int:
    """Binomial coefficient with the zero conventions.

    Returns 0 when either argument is negative or ``b > a`` (so ``a == b < 0``
    also gives 0); otherwise the usual coefficient.
    """
    return _BINOMIALS(a, b)


class _StirlingTable:
    def __init__(self):
        self._rows: list[tuple[int, ...]] = [(1,)]
        self._lock = threading.Lock()

    def row(self, k: int) -> tuple[int, ...]:
        if k >= len(self._rows):
            with self._lock:
                rows = self._rows
                while len(rows) <= k:
                    prev = rows[-1]
                    m = len(rows)
                    # S(m, i) = i S(m-1, i) + S(m-1, i-1); row m has entries i = 0..m
                    row = [0] * (m + 1)
                    for i in range(1, m + 1):
                        left = prev[i] * i if i < len(prev) else 0
                        row[i] = left + prev[i - 1]
                    rows.append(tuple(row))
        return self._rows[k]


_STIRLING = _StirlingTable()


def stirling2(k: int, i: int) -> int:
    """Stirling number of the second kind ``S(k, i)``."""
    if k < 0 or i < 0:
        raise RangeError(f"stirling2 needs k, i >= 0, got ({k}, {i})")
    if i > k:
        return 0
    return _STIRLING.row(k)[i]


def factorial(m: int) -> int:
    if m < 0:
        raise RangeError(f"factorial of negative number {m}")
    return math.factorial(m)


def to_decimal_string(value: Scalar, digits: int = 17) -> str:
    """Decimal expansion with ``digits`` significant digits, no locale."""
    if isinstance(value, float):
        return format(value, f".{digits}g")
    value = Fraction(value)
    if value == 0:
        return "0"
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(value.numerator) / Decimal(value.denominator)
    return format(d, f".{digits}g")


def to_exact_string(value: Scalar) -> str:
    """``"num/den"`` for rationals (``"num"`` when integral); repr for floats."""
    if isinstance(value, float):
        return repr(value)
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
