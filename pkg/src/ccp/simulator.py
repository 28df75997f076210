"""Monte Carlo sampling of coupon collection under independent draws."""

from __future__ import annotations

import math
import warnings
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import RangeError
from .popularity import Popularity

GENERATOR = "PCG64"


@dataclass(frozen=True)
class SimConfig:
    samples: int = 100_000
    seed: int = 0
    k_cap: int | None = None  # defaults to 1000 * n
    workers: int = 1

    def cap_for(self, n: int) -> int:
        cap = 1000 * n if self.k_cap is None else self.k_cap
        if cap < n:
            raise RangeError(f"k_cap {cap} below n={n}")
        return cap


@dataclass(frozen=True)
class EmpiricalDistribution:
    counts: dict[int, int]
    samples: int
    truncated: int
    seed: int
    generator: str = GENERATOR

    @property
    def completed(self) -> int:
        return self.samples - self.truncated

    def pmf(self, k: int) -> float:
        return self.counts.get(k, 0) / self.samples

    def cdf(self, k: int) -> float:
        return sum(v for t, v in self.counts.items() if t <= k) / self.samples

    def mean(self) -> float:
        """Mean over completed samples; truncated ones are excluded."""
        if self.truncated:
            warnings.warn(f"{self.truncated} truncated samples excluded from the mean", RuntimeWarning, stacklevel=2)
        return math.fsum(k * v for k, v in self.counts.items()) / self.completed

    def std_error(self) -> float:
        m = self.mean()
        var = math.fsum(v * (k - m) ** 2 for k, v in self.counts.items()) / (self.completed - 1)
        return math.sqrt(var / self.completed)


def _check(pop: Popularity, c: int) -> None:
    if not 1 <= c <= pop.n:
        raise RangeError(f"collection size {c} not in 1..{pop.n}")


def cumulative(pop: Popularity) -> np.ndarray:
    cum = np.cumsum(pop.array)
    cum[-1] = 1.0
    return cum


def sample_waiting_time(pop: Popularity, c: int, rng: np.random.Generator, k_cap: int | None = None) -> int | None:
    """Draw items until ``c`` distinct ones are seen; ``None`` if ``k_cap`` trials did not suffice."""
    _check(pop, c)
    cap = SimConfig(k_cap=k_cap).cap_for(pop.n)
    out = _kernels.collect(cumulative(pop), c, 1, cap, rng, chunk=max(64, 4 * c))
    return None if out[0] < 0 else int(out[0])


def _split(samples: int, workers: int) -> list[int]:
    base, extra = divmod(samples, workers)
    return [base + (i < extra) for i in range(workers)]


def empirical_distribution(pop: Popularity, c: int, cfg: SimConfig = SimConfig()) -> EmpiricalDistribution:
    """Histogram of ``cfg.samples`` simulated waiting times.

    Worker ``i`` draws from the ``i``-th child of ``SeedSequence(cfg.seed)``, so
    the histogram is a function of ``(pop, c, cfg)`` only.
    """
    _check(pop, c)
    if cfg.samples < 1:
        raise RangeError("samples must be >= 1")
    cap = cfg.cap_for(pop.n)
    cum = cumulative(pop)
    workers = max(1, cfg.workers)
    streams = [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(cfg.seed).spawn(workers)]
    sizes = _split(cfg.samples, workers)

    def run(i):
        return _kernels.collect(cum, c, sizes[i], cap, streams[i])

    if workers == 1:
        parts = [run(0)]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(workers)))
    draws = np.concatenate(parts)
    truncated = int(np.count_nonzero(draws < 0))
    counts = Counter(draws[draws >= 0].tolist())
    return EmpiricalDistribution(dict(sorted(counts.items())), cfg.samples, truncated, cfg.seed)


def dkw_epsilon(samples: int, delta: float = 1e-3) -> float:
    """Half-width of the Dvoretzky-Kiefer-Wolfowitz confidence band."""
    return math.sqrt(math.log(2.0 / delta) / (2.0 * samples))
