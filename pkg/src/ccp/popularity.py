"""Popularity vectors and subset machinery.

Items are numbered ``1..n`` as in the usual coupon-collector notation; an
index set is a strictly increasing tuple of such labels.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    BackendMismatch,
    IndexOutOfRange,
    NotNormalized,
    OutOfRange,
    ParseError,
    RangeError,
    SizeTooSmall,
)
from .numerics import Backend, Scalar, binomial, same_backend

FLOAT_SUM_TOLERANCE = 1e-12

IndexSet = tuple[int, ...]


@dataclass(frozen=True)
class Popularity:
    """A validated probability vector over ``n >= 2`` items.

    Build through :func:`from_values`, :func:`uniform` or :func:`parse`; the
    constructor itself does not validate.
    """

    probs: tuple[Scalar, ...]
    is_uniform: bool = field(default=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.probs)

    @property
    def backend(self) -> Backend:
        return Backend.of(self.probs[0])

    @property
    def exact(self) -> bool:
        return self.backend is Backend.EXACT

    @cached_property
    def scaled(self) -> tuple[tuple[int, ...], int]:
        """Integer numerators over a common denominator (exact backend only)."""
        if not self.exact:
            raise BackendMismatch("scaled integers need an exact popularity")
        den = math.lcm(*(p.denominator for p in self.probs))
        return tuple(p.numerator * (den // p.denominator) for p in self.probs), den

    @cached_property
    def array(self) -> np.ndarray:
        return np.array([float(p) for p in self.probs], dtype=np.float64)

    def __getitem__(self, label: int) -> Scalar:
        if not 1 <= label <= self.n:
            raise IndexOutOfRange(f"item {label} not in 1..{self.n}")
        return self.probs[label - 1]

    def moment(self, k: int) -> Scalar:
        """``sum_l p_l**k``."""
        return self.backend.total(p**k for p in self.probs)

    def __repr__(self) -> str:
        inner = ", ".join(str(p) for p in self.probs)
        return f"Popularity(n={self.n}, [{inner}])"


def _check_size(n: int) -> None:
    if n < 2:
        raise SizeTooSmall(f"need at least 2 items, got {n}")


def from_values(values: Sequence[Scalar], renormalize: bool = False) -> Popularity:
    """Validate ``values`` and wrap them as a :class:`Popularity`.

    Integers are promoted to rationals.  Rational inputs must sum to exactly
    one; float inputs must sum to one within ``FLOAT_SUM_TOLERANCE`` unless
    ``renormalize`` is set, in which case each entry is divided by the sum.
    """
    values = [Fraction(v) if isinstance(v, int) and not isinstance(v, bool) else v for v in values]
    _check_size(len(values))
    backend = same_backend(*values)
    if any(v <= 0 for v in values):
        raise OutOfRange("probabilities must be > 0")
    total = backend.total(values)
    if renormalize:
        values = [v / total for v in values]
        total = backend.total(values)
    if backend is Backend.EXACT:
        if total != 1:
            raise NotNormalized(f"probabilities sum to {total}, not 1")
    elif abs(total - 1.0) > FLOAT_SUM_TOLERANCE:
        raise NotNormalized(f"probabilities sum to {total!r}, not 1")
    if any(v >= 1 for v in values):
        raise OutOfRange("probabilities must be < 1")
    return Popularity(tuple(values))


def uniform(n: int, backend: Backend | str = Backend.EXACT) -> Popularity:
    _check_size(n)
    backend = Backend(backend)
    p = Fraction(1, n) if backend is Backend.EXACT else 1.0 / n
    return Popularity((p,) * n, is_uniform=True)


def random_rational(n: int, rng: random.Random, max_weight: int = 20) -> Popularity:
    """Random exact popularity with integer weights drawn from ``1..max_weight``."""
    _check_size(n)
    weights = [rng.randint(1, max_weight) for _ in range(n)]
    total = sum(weights)
    return from_values([Fraction(w, total) for w in weights])


def subset_probability(pop: Popularity, J: Sequence[int]) -> Scalar:
    seen = set()
    for label in J:
        if not 1 <= label <= pop.n:
            raise IndexOutOfRange(f"item {label} not in 1..{pop.n}")
        if label in seen:
            raise IndexOutOfRange(f"duplicate item {label}")
        seen.add(label)
    return pop.backend.total(pop.probs[i - 1] for i in J)


def subsets_of_size(n: int, j: int) -> Iterator[IndexSet]:
    """Lazily yield every size-``j`` subset of ``{1..n}`` in lexicographic order."""
    if not 0 <= j <= n:
        raise RangeError(f"subset size {j} not in 0..{n}")
    return combinations(range(1, n + 1), j)


def count_subsets(n: int, j: int) -> int:
    return binomial(n, j)


def parse_scalar(text, exact: bool | None = None) -> Scalar:
    """Parse ``"a/b"`` as a rational and decimal literals as floats.

    With ``exact=True`` decimal literals become exact fractions over powers
    of ten; with ``exact=False`` rationals are converted to floats.
    """
    if isinstance(text, bool):
        raise ParseError(f"not a probability: {text!r}")
    if isinstance(text, int):
        value: Scalar = Fraction(text)
    elif isinstance(text, float):
        value = Fraction(repr(text)) if exact else text
    elif isinstance(text, str):
        s = text.strip()
        try:
            if "/" in s:
                value = Fraction(s)
            elif exact:
                value = Fraction(s)
            else:
                value = float(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"cannot parse probability {text!r}") from exc
    else:
        raise ParseError(f"not a probability: {text!r}")
    if exact is False and isinstance(value, Fraction):
        value = float(value)
    return value


def parse(obj, backend: Backend | str | None = None, renormalize: bool = False) -> Popularity:
    """Build a popularity from the JSON document shape.

    Accepts ``{"probabilities": [...]}`` or ``{"uniform": n}``.  ``backend``
    forces every entry into one backend; without it the entries decide.
    """
    if not isinstance(obj, dict):
        raise ParseError("popularity document must be a JSON object")
    backend = Backend(backend) if backend is not None else None
    exact = None if backend is None else backend is Backend.EXACT
    if "uniform" in obj:
        n = obj["uniform"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise ParseError(f"uniform size must be an integer, got {n!r}")
        return uniform(n, backend or Backend.EXACT)
    if "probabilities" in obj:
        raw = obj["probabilities"]
        if not isinstance(raw, list):
            raise ParseError("probabilities must be a list")
        values = [parse_scalar(v, exact) for v in raw]
        if exact is None and len({type(v) for v in values}) > 1:
            # Mixed literals: rationals are only kept when every entry is one.
            values = [float(v) for v in values]
        return from_values(values, renormalize=renormalize)
    raise ParseError('expected a "probabilities" or "uniform" key')


def load(path: str | Path, backend: Backend | str | None = None, renormalize: bool = False) -> Popularity:
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc.msg}") from exc
    return parse(obj, backend=backend, renormalize=renormalize)
