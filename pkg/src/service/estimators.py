"""Interval estimators for Monte Carlo metrics.

Proportions use the Wilson score interval, which stays inside [0, 1] and
keeps its coverage near 0 and 1 where outage curves live. Means use the
normal approximation with the sample standard deviation. Sums are
compensated (math.fsum), so results do not depend on summation order.
"""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np
from scipy import stats

from src.domain.errors import ParameterError
from src.domain.models import MetricEstimate, MetricId

DEFAULT_CONFIDENCE = 0.95


def z_value(confidence: float = DEFAULT_CONFIDENCE) -> float:
    """Two-sided standard normal quantile for a confidence level."""
    if not 0.0 < confidence < 1.0:
        raise ParameterError(
            f"confidence must lie in (0, 1), got {confidence!r}", key="confidence"
        )
    return float(stats.norm.ppf(0.5 + confidence / 2.0))


def wilson_interval(
    successes: int, trials: int, confidence: float = DEFAULT_CONFIDENCE
) -> tuple[float, float]:
    """
    Calculate Wilson score confidence interval for binomial proportion.

    Args:
        successes: Number of successful trials
        trials: Total number of trials
        confidence: Confidence level (0.95 for 95%)

    Returns:
        Tuple of (lower_bound, upper_bound) as proportions [0.0, 1.0]

    Examples:
        >>> wilson_interval(9, 10)
        (0.595..., 0.982...)
    """
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials!r}", key="trials")
    if not 0 <= successes <= trials:
        raise ParameterError(
            f"successes must lie in [0, {trials}], got {successes!r}",
            key="successes",
        )

    z = z_value(confidence)
    p_hat = successes / trials

    denominator = 1 + z**2 / trials
    center = (p_hat + z**2 / (2 * trials)) / denominator
    margin = (z / denominator) * math.sqrt(
        p_hat * (1 - p_hat) / trials + z**2 / (4 * trials**2)
    )

    low = 0.0 if successes == 0 else max(0.0, center - margin)
    high = 1.0 if successes == trials else min(1.0, center + margin)
    return low, high


def mean_interval(
    values: Iterable[float], confidence: float = DEFAULT_CONFIDENCE
) -> tuple[float, float, float]:
    """Return (mean, lower, upper) of a normal-approximation interval.

    A single sample gives a zero-width interval.
    """
    samples = np.asarray(list(values), dtype=float)
    n = len(samples)
    if n == 0:
        raise ParameterError("need at least one sample", key="values")
    mean = math.fsum(samples) / n
    if n < 2:
        return mean, mean, mean
    variance = math.fsum((samples - mean) ** 2) / (n - 1)
    half = z_value(confidence) * math.sqrt(variance / n)
    return mean, mean - half, mean + half


def proportion_estimate(
    successes: int,
    trials: int,
    metric_id: MetricId = MetricId.OUTAGE,
    confidence: float = DEFAULT_CONFIDENCE,
) -> MetricEstimate:
    """Point estimate k/n with its Wilson interval."""
    low, high = wilson_interval(successes, trials, confidence)
    return MetricEstimate(
        metric_id=metric_id,
        mean=successes / trials,
        ci_low=low,
        ci_high=high,
        n_trials=trials,
    )


def mean_estimate(
    values: Iterable[float],
    metric_id: MetricId,
    confidence: float = DEFAULT_CONFIDENCE,
) -> MetricEstimate:
    """Sample mean with its normal-approximation interval."""
    samples = list(values)
    mean, low, high = mean_interval(samples, confidence)
    return MetricEstimate(
        metric_id=metric_id,
        mean=mean,
        ci_low=low,
        ci_high=high,
        n_trials=len(samples),
    )
