"""Sample statistics, correlations and chi-square goodness-of-fit.

Every variance and covariance uses the n - 1 denominator. The chi-square tail
is the upper regularized incomplete gamma, evaluated with numpy only.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from robustness_metrics.core.errors import (
    AllZeroCountsError,
    ConstantInputError,
    ConstantPredictorError,
    EmptyCountsError,
    EmptyInputError,
    InsufficientDataError,
    LengthMismatchError,
    StatisticsError,
)
from robustness_metrics.models.analysis import ChiSquareResult

GAMMA_EPS = 1e-15
GAMMA_MAX_ITER = 10_000
_TINY = 1e-300


def _as_array(values: Sequence[float]) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.ndim != 1:
        raise StatisticsError("expected a one-dimensional series")
    if not np.all(np.isfinite(array)):
        raise StatisticsError("series contains NaN or infinite values")
    return array


def _paired(xs: Sequence[float], ys: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    x = _as_array(xs)
    y = _as_array(ys)
    if len(x) != len(y):
        raise LengthMismatchError(f"series lengths differ: {len(x)} != {len(y)}")
    if len(x) == 0:
        raise EmptyInputError("paired series are empty")
    return x, y


def _is_constant(array: np.ndarray) -> bool:
    return bool(np.ptp(array) == 0.0)


def sample_var(xs: Sequence[float]) -> float:
    """Unbiased sample variance.

    Args:
        xs: Observations (at least two)

    Returns:
        Variance with the n - 1 denominator; exactly 0.0 for a constant series

    Raises:
        InsufficientDataError: Fewer than two observations
    """
    x = _as_array(xs)
    if len(x) < 2:
        raise InsufficientDataError("sample variance needs at least 2 observations")
    if _is_constant(x):
        return 0.0
    return float(np.var(x, ddof=1))


def sample_cov(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Unbiased sample covariance.

    Raises:
        InsufficientDataError: Fewer than two observations
        LengthMismatchError: Series of different lengths
    """
    x, y = _paired(xs, ys)
    if len(x) < 2:
        raise InsufficientDataError("sample covariance needs at least 2 observations")
    if _is_constant(x) or _is_constant(y):
        return 0.0
    dx = x - x.mean()
    dy = y - y.mean()
    return float(np.dot(dx, dy) / (len(x) - 1))


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation coefficient.

    Raises:
        InsufficientDataError: Fewer than two observations
        ConstantInputError: Either series is constant
    """
    x, y = _paired(xs, ys)
    if len(x) < 2:
        raise InsufficientDataError("correlation needs at least 2 observations")
    if _is_constant(x) or _is_constant(y):
        raise ConstantInputError("correlation is undefined for a constant series")
    dx = x - x.mean()
    dy = y - y.mean()
    r = np.dot(dx, dy) / math.sqrt(np.dot(dx, dx) * np.dot(dy, dy))
    return float(np.clip(r, -1.0, 1.0))


def rank_average(xs: Sequence[float]) -> np.ndarray:
    """Fractional ranks (1-based), ties sharing their average rank.

    Example:
        rank_average([10, 20, 20, 5]) -> [2.0, 3.5, 3.5, 1.0]
    """
    x = _as_array(xs)
    _, inverse, counts = np.unique(x, return_inverse=True, return_counts=True)
    upper = np.cumsum(counts)
    average = upper - (counts - 1) / 2.0
    return average[inverse.reshape(-1)]


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rank correlation with average ranks for ties.

    Raises:
        InsufficientDataError: Fewer than two observations
        ConstantInputError: Either series is constant
    """
    x, y = _paired(xs, ys)
    if len(x) < 2:
        raise InsufficientDataError("rank correlation needs at least 2 observations")
    if _is_constant(x) or _is_constant(y):
        raise ConstantInputError("rank correlation is undefined for a constant series")
    return pearson(rank_average(x), rank_average(y))


def r_squared(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Coefficient of determination of the least-squares fit of y on x.

    A constant y is reproduced exactly by the fitted mean, so it yields 1.0.

    Raises:
        InsufficientDataError: Fewer than two observations
        ConstantPredictorError: x is constant
    """
    x, y = _paired(xs, ys)
    if len(x) < 2:
        raise InsufficientDataError("regression needs at least 2 observations")
    if _is_constant(x):
        raise ConstantPredictorError("regression is undefined for a constant predictor")
    if _is_constant(y):
        return 1.0
    dx = x - x.mean()
    dy = y - y.mean()
    slope = np.dot(dx, dy) / np.dot(dx, dx)
    residuals = dy - slope * dx
    sse = float(np.dot(residuals, residuals))
    sst = float(np.dot(dy, dy))
    return float(np.clip(1.0 - sse / sst, 0.0, 1.0))


def mean_abs_deviation(a: Sequence[float], b: Sequence[float]) -> float:
    """Mean absolute elementwise difference (L1 distance per element).

    Raises:
        LengthMismatchError: Series of different lengths
        EmptyInputError: Empty series
    """
    x, y = _paired(a, b)
    return float(np.mean(np.abs(x - y)))


def _gamma_series(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x) by series, for x < a + 1."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(GAMMA_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * GAMMA_EPS:
            break
    else:
        raise StatisticsError(f"incomplete gamma series did not converge (a={a}, x={x})")
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_continued_fraction(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) by Lentz's method, for x >= a + 1."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, GAMMA_MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < GAMMA_EPS:
            break
    else:
        raise StatisticsError(f"incomplete gamma fraction did not converge (a={a}, x={x})")
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def regularized_gamma_q(a: float, x: float) -> float:
    """Upper regularized incomplete gamma Q(a, x) = 1 - P(a, x).

    Args:
        a: Shape, strictly positive
        x: Argument, non-negative

    Returns:
        Q(a, x) in [0, 1]
    """
    if a <= 0:
        raise ValueError("a must be positive")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        q = 1.0 - _gamma_series(a, x)
    else:
        q = _gamma_continued_fraction(a, x)
    return min(1.0, max(0.0, q))


def chi_square_sf(statistic: float, df: int) -> float:
    """Upper tail probability of a chi-square distribution."""
    return regularized_gamma_q(df / 2.0, statistic / 2.0)


def bonferroni(alpha: float, m: int) -> float:
    """Bonferroni-adjusted significance level alpha / m."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if m < 1:
        raise ValueError(f"number of comparisons must be >= 1, got {m}")
    return alpha / m


def chi_square_gof(
    counts: Sequence[int],
    expected_probs: Sequence[float],
    alpha: float = 0.05,
    m: int = 1,
) -> ChiSquareResult:
    """Pearson chi-square goodness-of-fit against given category probabilities.

    Args:
        counts: Observed non-negative count per category
        expected_probs: Null probability per category (sums to 1)
        alpha: Family-wise significance level
        m: Number of comparisons for the Bonferroni correction

    Raises:
        EmptyCountsError: Fewer than two categories
        AllZeroCountsError: Total count is zero
    """
    observed = np.asarray(counts, dtype=float)
    probs = np.asarray(expected_probs, dtype=float)
    if observed.ndim != 1 or len(observed) < 2:
        raise EmptyCountsError("goodness-of-fit needs at least 2 categories")
    if len(probs) != len(observed):
        raise LengthMismatchError("counts and expected probabilities differ in length")
    if np.any(observed < 0) or np.any(observed != np.floor(observed)):
        raise StatisticsError("counts must be non-negative integers")
    if np.any(probs <= 0) or abs(probs.sum() - 1.0) > 1e-12:
        raise StatisticsError("expected probabilities must be positive and sum to 1")
    total = observed.sum()
    if total == 0:
        raise AllZeroCountsError("all category counts are zero")
    return _chi_square(observed, total * probs, alpha, m)


def chi_square_uniform(counts: Sequence[int], alpha: float = 0.05, m: int = 1) -> ChiSquareResult:
    """Chi-square test of counts against the uniform distribution.

    Example:
        chi_square_uniform([10] * 6).statistic -> 0.0 (p_value 1.0)
    """
    observed = np.asarray(counts, dtype=float)
    if observed.ndim != 1 or len(observed) < 2:
        raise EmptyCountsError("goodness-of-fit needs at least 2 categories")
    if np.any(observed < 0) or np.any(observed != np.floor(observed)):
        raise StatisticsError("counts must be non-negative integers")
    total = observed.sum()
    if total == 0:
        raise AllZeroCountsError("all category counts are zero")
    # N / k is exact whenever the counts are exactly uniform
    expected = np.full(len(observed), total / len(observed))
    return _chi_square(observed, expected, alpha, m)


def _chi_square(
    observed: np.ndarray, expected: np.ndarray, alpha: float, m: int
) -> ChiSquareResult:
    statistic = float(np.sum((observed - expected) ** 2 / expected))
    df = len(observed) - 1
    p_value = chi_square_sf(statistic, df)
    alpha_adjusted = bonferroni(alpha, m)
    return ChiSquareResult(
        statistic=statistic,
        df=df,
        p_value=p_value,
        alpha=alpha,
        alpha_adjusted=alpha_adjusted,
        reject=p_value < alpha_adjusted,
    )
