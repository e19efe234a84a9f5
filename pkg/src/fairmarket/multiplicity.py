"""Multiplicity accounting: how many microstates realize a macrostate.

W = N! / prod(n_i!) is never materialized; everything happens in log space.
Exact log-factorials use the log-gamma function and serve as the oracle
against which the Stirling variant is quantified.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from enum import Enum
from math import lgamma, log
from typing import Sequence

from .core import (
    CategoryDistribution,
    EmptyDistribution,
    Money,
    SalarySample,
    UnmappableSalary,
)


class MultiplicityMethod(Enum):
    EXACT_LOG_GAMMA = "exact_log_gamma"
    STIRLING = "stirling"


class BinningMode(Enum):
    """How salaries map onto levels: exact match, or half-open intervals
    [level_i, level_{i+1}) with the first bin extending down to zero."""

    EXACT = "exact"
    INTERVAL = "interval"


@dataclass(frozen=True)
class MultiplicityResult:
    log_w_nats: float
    method: MultiplicityMethod

    def __post_init__(self):
        if self.log_w_nats < 0:
            raise ValueError("log multiplicity cannot be negative")

    @property
    def log10_w(self) -> float:
        return self.log_w_nats / log(10)


def log_multiplicity(
    dist: CategoryDistribution,
    method: MultiplicityMethod = MultiplicityMethod.EXACT_LOG_GAMMA,
) -> MultiplicityResult:
    """ln W for a macrostate, exact (log-gamma) or Stirling-approximate.

    Zero counts contribute nothing under either method.  The Stirling form
    N ln N - N - sum(n_i ln n_i - n_i) equals N times the headcount-share
    entropy, which is why maximizing ln W and maximizing entropy coincide.
    """
    n = dist.n
    if n == 0:
        raise EmptyDistribution("distribution has no employees")
    counts = [c for c in dist.counts if c > 0]
    if method is MultiplicityMethod.EXACT_LOG_GAMMA:
        value = lgamma(n + 1) - sum(lgamma(c + 1) for c in counts)
    elif method is MultiplicityMethod.STIRLING:
        value = (n * log(n) - n) - sum(c * log(c) - c for c in counts)
    else:
        raise ValueError(f"unknown method {method!r}")
    if len(counts) == 1:
        value = 0.0  # single active category: W = 1 exactly
    return MultiplicityResult(max(value, 0.0), method)


def stirling_gap(n: int) -> float:
    """ln n! minus its Stirling approximation n ln n - n.

    Positive and monotone in n, asymptotically 0.5 ln(2 pi n); the relative
    error of Stirling therefore vanishes as n grows.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    return lgamma(n + 1) - (n * log(n) - n)


def entropy_from_multiplicity(dist: CategoryDistribution) -> float:
    """Per-employee Stirling log-multiplicity, ln W / N.

    Algebraically identical to shannon_entropy of the same distribution.
    """
    n = dist.n
    if n == 0:
        raise EmptyDistribution("distribution has no employees")
    return log_multiplicity(dist, MultiplicityMethod.STIRLING).log_w_nats / n


def macrostate_of(
    sample: SalarySample,
    binning: Sequence[Money],
    mode: BinningMode = BinningMode.EXACT,
) -> CategoryDistribution:
    """Count employees per salary category.

    EXACT mode requires every salary to sit on a level and raises
    UnmappableSalary otherwise; INTERVAL mode assigns each salary to the
    half-open bin of the greatest level not exceeding it (salaries below the
    first level fall into the first bin, so a single level covers (0, inf)).
    """
    levels = tuple(int(x) for x in binning)
    if any(a >= b for a, b in zip(levels, levels[1:])):
        raise ValueError("binning levels must be strictly increasing")
    counts = [0] * len(levels)
    if mode is BinningMode.EXACT:
        index = {level: i for i, level in enumerate(levels)}
        for s in sample.salaries:
            try:
                counts[index[s]] += 1
            except KeyError:
                raise UnmappableSalary(
                    f"salary {s} is not on any exact level"
                ) from None
    elif mode is BinningMode.INTERVAL:
        for s in sample.salaries:
            counts[max(bisect.bisect_right(levels, s) - 1, 0)] += 1
    else:
        raise ValueError(f"unknown binning mode {mode!r}")
    return CategoryDistribution(levels, counts)
