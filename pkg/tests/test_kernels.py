import math
from itertools import combinations

import numpy as np
import pytest

from ccp import _kernels

needs_numba = pytest.mark.skipif(not _kernels.NUMBA_AVAILABLE, reason="numba not installed")


def reference(p, j, k, offset=0.0, tail=False):
    terms = []
    for c in combinations(p.tolist(), j):
        x = offset + math.fsum(c)
        terms.append(x**k * ((1.0 - x) if tail else 1.0))
    return math.fsum(terms)


@pytest.mark.parametrize("use_numba", [pytest.param(True, marks=needs_numba), False])
@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_power_sum_paths_match_reference(use_numba, n):
    rng = np.random.default_rng(n)
    p = rng.random(n)
    p /= p.sum()
    for j in range(n + 1):
        for k in (0, 1, 2, 5):
            for offset, tail in ((0.0, False), (0.03, False), (0.0, True)):
                got = _kernels.power_sum(p, j, k, offset, tail, use_numba=use_numba)
                assert got == pytest.approx(reference(p, j, k, offset, tail), rel=1e-13, abs=1e-14)


@needs_numba
def test_paths_agree_on_larger_input():
    rng = np.random.default_rng(0)
    p = rng.random(20)
    p /= p.sum()
    a = _kernels.power_sum(p, 10, 3, use_numba=True)
    b = _kernels.power_sum(p, 10, 3, use_numba=False)
    assert a == pytest.approx(b, rel=1e-14)


@needs_numba
def test_collect_paths_identical():
    cum = np.cumsum([0.1, 0.2, 0.3, 0.4])
    cum[-1] = 1.0
    a = _kernels.collect(cum, 4, 3000, 4000, np.random.default_rng(5), chunk=257, use_numba=True)
    b = _kernels.collect(cum, 4, 3000, 4000, np.random.default_rng(5), chunk=257, use_numba=False)
    assert np.array_equal(a, b)
    assert a.min() >= 4


def test_collect_truncation_marker():
    cum = np.array([0.999, 1.0])
    out = _kernels.collect(cum, 2, 200, 3, np.random.default_rng(1), use_numba=False)
    assert set(np.unique(out)) <= {-1, 2, 3}
    assert (out == -1).sum() > 150


def test_chunk_boundaries_do_not_change_results():
    cum = np.cumsum(np.full(6, 1 / 6))
    cum[-1] = 1.0
    a = _kernels.collect(cum, 6, 500, 6000, np.random.default_rng(2), chunk=7, use_numba=False)
    b = _kernels.collect(cum, 6, 500, 6000, np.random.default_rng(2), chunk=1 << 16, use_numba=False)
    # an interrupted sample restarts on the carried tail, so chunking is invisible
    assert np.array_equal(a, b)


def test_env_flag_disables_numba(monkeypatch):
    monkeypatch.setattr(_kernels, "USE_NUMBA", False)
    assert _kernels._resolve(None) is False


def test_benchmark_script_runs():
    import subprocess
    import sys
    from pathlib import Path

    script = Path(__file__).resolve().parent.parent / "benchmarks" / "bench_kernels.py"
    out = subprocess.run(
        [sys.executable, str(script), "--n", "10", "--j", "5", "--k", "2", "--c", "4", "--samples", "2000", "--repeat", "1"],
        capture_output=True, text=True, check=True,
    ).stdout
    assert out.count("numba") == 2 and out.count("numpy") == 2
