"""Float hot loops: subset power sums and coupon-collection sampling.

Every kernel has a numba ``@njit`` version and a pure-numpy version with the
same contract.  The numba path is used when numba imports and the
environment variable ``CCP_NUMBA`` is not set to ``0``; pass ``use_numba``
explicitly to override per call (the benchmark does this).
"""

from __future__ import annotations

import math
import os
from itertools import combinations

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_AVAILABLE = numba is not None
USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("CCP_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

# Cap on the size of one dense block in the numpy fallback.
_BLOCK = 1 << 22


def _resolve(use_numba: bool | None) -> bool:
    if use_numba is None:
        return USE_NUMBA
    if use_numba and not NUMBA_AVAILABLE:
        raise RuntimeError("numba is not installed")
    return use_numba


# --------------------------------------------------------------------------
# power sums


def _subset_sums(p: np.ndarray, a: int) -> np.ndarray:
    """``P_J`` for every size-``a`` subset of ``p``, in lexicographic order."""
    m = p.shape[0]
    if a == 0:
        return np.zeros(1)
    count = math.comb(m, a)
    flat = np.fromiter(
        (i for c in combinations(range(m), a) for i in c), dtype=np.int64, count=count * a
    )
    return p[flat.reshape(count, a)].sum(axis=1)


def _grid_sum_py(A, B, k, tail):
    """Sum of ``x**k`` (times ``1 - x`` when ``tail``) over ``x = A[r] + B[s]``.

    Row totals are folded in with Neumaier compensation.
    """
    total = 0.0
    comp = 0.0
    for r in range(A.shape[0]):
        a = A[r]
        row = 0.0
        for s in range(B.shape[0]):
            x = a + B[s]
            term = 1.0
            for _ in range(k):
                term *= x
            if tail:
                term *= 1.0 - x
            row += term
        t = total + row
        if abs(total) >= abs(row):
            comp += (total - t) + row
        else:
            comp += (row - t) + total
        total = t
    return total + comp


if NUMBA_AVAILABLE:
    _grid_sum_nb = numba.njit(cache=True, nogil=True)(_grid_sum_py)
else:  # pragma: no cover
    _grid_sum_nb = None


def _grid_sum_np(A, B, k, tail):
    rows = max(1, _BLOCK // max(1, B.shape[0]))
    parts = []
    for start in range(0, A.shape[0], rows):
        x = A[start:start + rows, None] + B[None, :]
        term = x**k
        if tail:
            term = term * (1.0 - x)
        parts.append(float(term.sum()))
    return math.fsum(parts)


def power_sum(p: np.ndarray, j: int, k: int, offset: float = 0.0, tail: bool = False, use_numba: bool | None = None) -> float:
    """Float brute-force ``sum_{|J|=j} (offset + P_J)**k`` over subsets of ``p``.

    With ``tail`` each term is multiplied by ``1 - (offset + P_J)``.  The empty
    subset contributes ``offset**k`` with ``0**0 == 1``.
    """
    p = np.ascontiguousarray(p, dtype=np.float64)
    if not 0 <= j <= p.shape[0]:
        return 0.0
    if j == 0:
        term = offset**k
        return term * (1.0 - offset) if tail else term
    grid = _grid_sum_nb if _resolve(use_numba) else _grid_sum_np
    # Split the items in two halves; every size-j subset is a size-a subset of
    # the left half joined with a size-(j-a) subset of the right half.
    h = p.shape[0] // 2
    left, right = p[:h], p[h:]
    parts = []
    for a in range(max(0, j - right.shape[0]), min(j, h) + 1):
        A = _subset_sums(left, a) + offset
        B = _subset_sums(right, j - a)
        if A.shape[0] > B.shape[0]:
            A, B = B, A
        parts.append(float(grid(A, B, k, tail)))
    return math.fsum(parts)


# --------------------------------------------------------------------------
# sampling


def _collect_py(cum, c, uniforms, k_cap, out, start):
    """Run collections until the uniforms run out mid-sample.

    ``cum`` is the cumulative popularity.  Writes trial counts (``-1`` when
    ``k_cap`` was hit) into ``out[start:]`` and returns ``(done, used)``:
    samples completed and uniforms consumed.
    """
    n = cum.shape[0]
    seen = np.zeros(n, dtype=np.bool_)
    pos = 0
    done = start
    total = uniforms.shape[0]
    while done < out.shape[0]:
        for i in range(n):
            seen[i] = False
        distinct = 0
        trials = 0
        q = pos
        result = 0
        while True:
            if trials == k_cap:
                result = -1
                break
            if q == total:
                result = -2
                break
            item = np.searchsorted(cum, uniforms[q], side="right")
            if item >= n:
                item = n - 1
            q += 1
            trials += 1
            if not seen[item]:
                seen[item] = True
                distinct += 1
                if distinct == c:
                    result = trials
                    break
        if result == -2:
            break
        out[done] = result
        done += 1
        pos = q
    return done, pos


if NUMBA_AVAILABLE:
    _collect_nb = numba.njit(cache=True, nogil=True)(_collect_py)
else:  # pragma: no cover
    _collect_nb = None


def _collect_np(cum, c, uniforms, k_cap, out, start):
    # Item lookup is vectorised; the per-sample bookkeeping stays a plain loop.
    items = np.minimum(np.searchsorted(cum, uniforms, side="right"), cum.shape[0] - 1).tolist()
    total = len(items)
    pos = 0
    done = start
    while done < out.shape[0]:
        seen = set()
        q = pos
        result = 0
        trials = 0
        while True:
            if trials == k_cap:
                result = -1
                break
            if q == total:
                result = -2
                break
            seen.add(items[q])
            q += 1
            trials += 1
            if len(seen) == c:
                result = trials
                break
        if result == -2:
            break
        out[done] = result
        done += 1
        pos = q
    return done, pos


def collect(cum: np.ndarray, c: int, samples: int, k_cap: int, rng: np.random.Generator, chunk: int = 1 << 16, use_numba: bool | None = None) -> np.ndarray:
    """Draw ``samples`` waiting times; ``-1`` marks a sample truncated at ``k_cap``.

    Uniforms are pulled from ``rng`` in chunks; a sample interrupted by the
    end of a chunk is restarted on the carried-over tail, so the result is a
    deterministic function of the generator stream for either path.
    """
    kernel = _collect_nb if _resolve(use_numba) else _collect_np
    cum = np.ascontiguousarray(cum, dtype=np.float64)
    out = np.empty(samples, dtype=np.int64)
    done = 0
    carry = np.empty(0)
    while done < samples:
        size = max(chunk, 2 * carry.shape[0])
        buf = np.concatenate((carry, rng.random(size)))
        done, used = kernel(cum, c, buf, k_cap, out, done)
        carry = buf[used:]
    return out
