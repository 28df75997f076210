"""Coupon-collector waiting times and subset power-sum identities."""

from .decomposition import (
    AlphaTable,
    alpha_general,
    alpha_uniform,
    corollary1_sum,
    eta,
    power_sum,
    power_sum_fast,
    theorem1_eval,
)
from .errors import CCPError, CancellationWarning
from .numerics import Backend, binomial, factorial, stirling2
from .popularity import Popularity, from_values, subset_probability, subsets_of_size, uniform
from .power_sums import power_sum_bruteforce, power_sum_conditioned
from .waiting_time import ccdf, cdf, expectation, min_time_probability, pdf, pdf_uniform

__version__ = "0.1.0"
