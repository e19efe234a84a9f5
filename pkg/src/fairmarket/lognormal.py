"""Closed-form lognormal analytics, maximum-likelihood fitting, and a
Kolmogorov-Smirnov goodness-of-fit statistic.

Salary samples are held in minor units; everything here works in major
money units (the unit LognormalParams.mu refers to).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import ndtr

from .core import (
    MINOR_UNITS_PER_MAJOR,
    DegenerateSample,
    LognormalParams,
    NonPositiveSalary,
    NonPositiveSupport,
    SalarySample,
)


def lognormal_pdf(s, params: LognormalParams):
    """Density (1 / (s sigma sqrt(2 pi))) exp(-(ln s - mu)^2 / (2 sigma^2)).

    Accepts a scalar or an array; the support is s > 0.
    """
    arr = np.asarray(s, dtype=float)
    if np.any(arr <= 0):
        raise NonPositiveSupport("lognormal density is defined for s > 0 only")
    z = (np.log(arr) - params.mu) / params.sigma
    out = np.exp(-0.5 * z * z) / (arr * params.sigma * math.sqrt(2 * math.pi))
    return float(out) if np.isscalar(s) else out


def lognormal_cdf(s, params: LognormalParams):
    """P(S <= s) for the lognormal; 0 for s <= 0."""
    arr = np.asarray(s, dtype=float)
    out = np.where(arr > 0, ndtr((np.log(np.maximum(arr, 1e-300)) - params.mu) / params.sigma), 0.0)
    return float(out) if np.isscalar(s) else out


def lognormal_moments(params: LognormalParams) -> tuple[float, float]:
    """Mean exp(mu + sigma^2/2) and variance (exp(sigma^2) - 1) exp(2 mu + sigma^2)."""
    s2 = params.sigma**2
    mean = math.exp(params.mu + 0.5 * s2)
    variance = (math.exp(s2) - 1.0) * math.exp(2.0 * params.mu + s2)
    return mean, variance


def lognormal_entropy(params: LognormalParams) -> float:
    """Differential entropy mu + 0.5 ln(2 pi e sigma^2), in nats.

    Shifts additively with mu: H(mu + c, sigma) = H(mu, sigma) + c.
    """
    return params.mu + 0.5 * math.log(2.0 * math.pi * math.e * params.sigma**2)


def fit_lognormal(sample: SalarySample) -> LognormalParams:
    """Maximum-likelihood fit on logs: mu-hat is the mean of ln S_i and
    sigma-hat the population standard deviation of ln S_i (S in major
    units).

    Raises DegenerateSample when fewer than two salaries or all equal
    (sigma-hat = 0 is not a valid lognormal).
    """
    if any(s <= 0 for s in sample.salaries):
        raise NonPositiveSalary("lognormal fit needs strictly positive salaries")
    if sample.n < 2:
        raise DegenerateSample("need at least two salaries to fit")
    logs = np.log(np.array(sample.salaries, dtype=float) / MINOR_UNITS_PER_MAJOR)
    mu = float(logs.mean())
    sigma = float(logs.std())  # population (ddof=0)
    if sigma == 0.0:
        raise DegenerateSample("all salaries equal; sigma-hat would be zero")
    return LognormalParams(mu, sigma)


def ks_statistic(sample: SalarySample, params: LognormalParams) -> float:
    """Two-sided Kolmogorov-Smirnov distance between the sample's empirical
    CDF and the lognormal CDF, in [0, 1]."""
    if any(s <= 0 for s in sample.salaries):
        raise NonPositiveSalary("KS against a lognormal needs positive salaries")
    values = np.sort(np.array(sample.salaries, dtype=float) / MINOR_UNITS_PER_MAJOR)
    n = values.size
    cdf = lognormal_cdf(values, params)
    upper = np.arange(1, n + 1) / n
    lower = np.arange(0, n) / n
    return float(np.max(np.maximum(upper - cdf, cdf - lower)))


def sample_lognormal(params: LognormalParams, n: int, seed: int) -> SalarySample:
    """Seeded lognormal draws in major units, rounded to whole minor units
    (clamped to at least one)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    values = rng.lognormal(mean=params.mu, sigma=params.sigma, size=n)
    cents = np.maximum(np.rint(values * MINOR_UNITS_PER_MAJOR), 1).astype(np.int64)
    return SalarySample(int(c) for c in cents)
