"""Summary statistics for step-count experiments.

Conventions: the table-facing standard deviation uses the n-1
denominator; skewness is population g1 = m3 / m2^1.5 and kurtosis is
the non-excess m4 / m2^2 (a normal sample sits near 3.0).  The
normality check is a two-sided Kolmogorov-Smirnov statistic against a
normal with mean and deviation estimated from the sample; its p-value
comes from the asymptotic Kolmogorov distribution and is therefore a
Lilliefors-style approximation, adequate for a coarse "no significant
difference" check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import kolmogorov, ndtr

#: ln(2/sqrt(3)): average log-shrink per iteration of the shortcut map.
LN_SHRINK = math.log(2.0) - 0.5 * math.log(3.0)

KS_MIN_SAMPLES = 8


@dataclass(frozen=True)
class SampleSet:
    """Step counts from repeated random experiments at one digit size."""

    digits: int
    seed: int
    counts: List[int]


@dataclass(frozen=True)
class ExperimentSummary:
    n: int
    mean: float
    std: float  # sample standard deviation, n-1 denominator
    skewness: Optional[float]  # None when undefined (zero variance)
    kurtosis: Optional[float]  # non-excess; None when undefined
    ks_statistic: Optional[float]
    ks_p_approx: Optional[float]
    model_mean: float
    mean_over_model: Optional[float]


def expected_steps_model(digits: int) -> float:
    """Predicted mean stopping time for numbers with the given digit count.

    A number with D decimal digits has log(n) ~ D*ln(10), and each
    iteration shrinks log(n) by ln(2/sqrt(3)) on average, giving
    D * ln(10) / ln(2/sqrt(3)) steps.  digits=0 maps to 0 as the empty
    guard.
    """
    if digits < 0:
        raise ValueError("digits must be nonnegative")
    return digits * math.log(10.0) / LN_SHRINK


def ks_normal(
    values: Sequence[float], min_n: int = KS_MIN_SAMPLES
) -> Tuple[float, float]:
    """Two-sided KS statistic against a fitted normal, with approximate p.

    D = sup |F_n(x) - Phi((x - mean)/std)| via the sorted-sample
    formula; p = K(sqrt(n) * D) from the asymptotic Kolmogorov
    distribution.  Requires nonzero variance and at least min_n values;
    the asymptotic p is meaningless for tiny n, so min_n should only be
    lowered for testing the D formula itself.
    """
    xs = np.sort(np.asarray(values, dtype=float))
    n = xs.size
    if n < max(2, min_n):
        raise ValueError(f"KS test needs at least {max(2, min_n)} samples")
    mean = xs.mean()
    std = xs.std(ddof=1)
    if std == 0.0:
        raise ValueError("KS test undefined for a constant sample")
    cdf = ndtr((xs - mean) / std)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - cdf)
    d_minus = np.max(cdf - (i - 1) / n)
    d = float(max(d_plus, d_minus))
    p = float(kolmogorov(math.sqrt(n) * d))
    return d, p


def summary_stats(samples: SampleSet) -> ExperimentSummary:
    """Aggregate a sample set into the table-facing summary.

    Needs n >= 2; shape statistics are reported as None (an explicit
    undefined marker, not NaN) for degenerate zero-variance samples,
    and the KS fields are None when the sample is too small or
    degenerate.
    """
    xs = np.asarray(samples.counts, dtype=float)
    n = xs.size
    if n < 2:
        raise ValueError("summary needs at least 2 samples")
    mean = float(xs.mean())
    std = float(xs.std(ddof=1))
    centered = xs - mean
    m2 = float(np.mean(centered**2))
    skewness: Optional[float] = None
    kurtosis: Optional[float] = None
    if m2 > 0.0 and n >= 3:
        m3 = float(np.mean(centered**3))
        m4 = float(np.mean(centered**4))
        skewness = m3 / m2**1.5
        kurtosis = m4 / m2**2
    ks_stat: Optional[float] = None
    ks_p: Optional[float] = None
    if n >= KS_MIN_SAMPLES and std > 0.0:
        ks_stat, ks_p = ks_normal(samples.counts)
    model = expected_steps_model(samples.digits)
    ratio = mean / model if model > 0.0 else None
    return ExperimentSummary(
        n=n,
        mean=mean,
        std=std,
        skewness=skewness,
        kurtosis=kurtosis,
        ks_statistic=ks_stat,
        ks_p_approx=ks_p,
        model_mean=model,
        mean_over_model=ratio,
    )
