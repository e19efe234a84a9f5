"""Inequality and fairness measures over salary data.

All entropies are in nats.  Shares are formed by dividing exact integers, so
every measure is invariant under integer rescaling of the money unit exactly
(homogeneity of degree zero holds bit-for-bit, not just to tolerance):
``a / b`` on Python ints is the correctly rounded real quotient, and scaling
both operands by the same integer leaves that quotient unchanged.

The Gini coefficient is evaluated as an exact rational via sorted prefix
sums before the final float conversion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .core import (
    CategoryDistribution,
    EmptyDistribution,
    InvalidPartition,
    Money,
    NonPositiveSalary,
    SalarySample,
    ZeroTotalIncome,
)


@dataclass(frozen=True)
class ShareVector:
    """Income shares p_i = S_i / sum(S), non-negative and summing to one."""

    shares: tuple[float, ...]

    def __init__(self, shares: Iterable[float]):
        values = tuple(float(p) for p in shares)
        if any(p < 0 for p in values):
            raise ValueError("shares must be non-negative")
        if abs(math.fsum(values) - 1.0) > 1e-12:
            raise ValueError("shares must sum to 1 within 1e-12")
        object.__setattr__(self, "shares", values)

    @classmethod
    def from_sample(cls, sample: SalarySample) -> "ShareVector":
        total = sample.total
        if total == 0:
            raise ZeroTotalIncome("cannot form shares of a zero total")
        return cls(s / total for s in sample.salaries)


def _require_positive(sample: SalarySample) -> None:
    if any(s <= 0 for s in sample.salaries):
        raise NonPositiveSalary("log-based measures need strictly positive salaries")


_EXACT_FLOAT_LIMIT = 2**53


def _sorted_ratios(sample: SalarySample, scale: int = 1) -> np.ndarray:
    """Correctly rounded ratios (s * scale) / total, in sorted-salary order.

    Sorting fixes the summation order, so permuting a sample cannot change
    any downstream float by even an ulp.  The vectorized path is taken only
    while every intermediate integer stays exactly representable in a
    float64; beyond that, Python's big-int division keeps the ratios
    correctly rounded, which is what makes integer rescaling of the money
    unit an exact no-op for every share-based measure.
    """
    total = sample.total
    if total * scale < _EXACT_FLOAT_LIMIT:
        arr = np.sort(np.fromiter(sample.salaries, dtype=np.int64, count=sample.n))
        return (arr * scale) / total
    return np.array([(s * scale) / total for s in sorted(sample.salaries)])


def shannon_entropy(dist: CategoryDistribution) -> float:
    """Entropy -sum(p_i ln p_i) of the headcount shares of a macrostate.

    Empty categories contribute 0 (the 0 ln 0 := 0 convention).
    """
    n = dist.n
    if n == 0:
        raise EmptyDistribution("distribution has no employees")
    p = np.array([c / n for c in dist.counts if c > 0])
    return float(-np.sum(p * np.log(p))) + 0.0


def share_entropy(sample: SalarySample) -> float:
    """Entropy of individual income shares p_i = S_i / sum(S), in nats.

    This is the fairness measure singled out by the axiom suite; it equals
    ln N for equal pay and decreases as pay concentrates.
    """
    _require_positive(sample)
    p = _sorted_ratios(sample)
    return float(-np.sum(p * np.log(p))) + 0.0


def normalized_share_entropy(sample: SalarySample) -> float:
    """share_entropy / ln N, so equal allocations score 1 for every N >= 2.

    For a single employee the measure saturates trivially and 1.0 is
    returned.
    """
    if sample.n == 1:
        _require_positive(sample)
        return 1.0
    return share_entropy(sample) / math.log(sample.n)


def theil_index(sample: SalarySample) -> float:
    """Theil index T = (1/N) sum (S_i/S_ave) ln(S_i/S_ave).

    Equals ln N - share_entropy(sample); zero iff all salaries are equal.
    """
    _require_positive(sample)
    n = sample.n
    # S_i / S_ave == S_i * n / total, formed from exact integers
    r = _sorted_ratios(sample, scale=n)
    return float(np.sum(r * np.log(r)) / n) + 0.0


class TheilDecomposition(NamedTuple):
    """Between-group and per-group within Theil terms.

    Reconstruction: total == between + sum(weight * within) where weights
    are the group income shares.
    """

    between: float
    within: tuple[float, ...]
    weights: tuple[float, ...]


def theil_decomposition(
    sample: SalarySample, groups: Sequence[Sequence[int]]
) -> TheilDecomposition:
    """Split the Theil index into a between-group term and per-group within
    terms, weighted by group income shares.

    ``groups`` must partition the sample indices exactly.
    """
    _require_positive(sample)
    n = sample.n
    seen: set[int] = set()
    for g, members in enumerate(groups):
        if not members:
            raise InvalidPartition(f"group {g} is empty")
        for i in members:
            if not 0 <= i < n:
                raise InvalidPartition(f"index {i} out of range")
            if i in seen:
                raise InvalidPartition(f"index {i} appears in more than one group")
            seen.add(i)
    if len(seen) != n:
        raise InvalidPartition("groups do not cover the whole sample")

    total = sample.total
    salaries = sample.salaries
    within: list[float] = []
    weights: list[float] = []
    between_terms: list[float] = []
    for members in groups:
        sub = SalarySample(salaries[i] for i in members)
        g_total = sub.total
        weight = g_total / total
        # group mean / overall mean from exact integers
        ratio = (g_total * n) / (total * len(members))
        weights.append(weight)
        within.append(theil_index(sub))
        between_terms.append(weight * math.log(ratio))
    return TheilDecomposition(
        between=math.fsum(between_terms) + 0.0,
        within=tuple(within),
        weights=tuple(weights),
    )


def gini(sample: SalarySample) -> float:
    """Gini coefficient G = sum_ij |S_i - S_j| / (2 N^2 S_ave).

    Computed as an exact rational via sorted prefix sums (no Lorenz-curve
    approximation), then converted to float; range [0, 1 - 1/N].
    """
    total = sample.total
    if total == 0:
        raise ZeroTotalIncome("Gini undefined for zero total income")
    xs = sorted(sample.salaries)
    n = len(xs)
    pair_sum = sum(x * (2 * i - n + 1) for i, x in enumerate(xs))
    # sum_ij |S_i - S_j| == 2 * pair_sum; denominator 2 N^2 S_ave == 2 N total
    return float(Fraction(pair_sum, n * total))


def maximin(sample: SalarySample) -> Money:
    """The salary of the least well off employee."""
    return min(sample.salaries)
