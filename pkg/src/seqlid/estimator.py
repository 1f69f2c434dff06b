"""Binomial probability estimates with low/base/high confidence bounds.

A token seen ``m`` times out of ``n`` category tokens gets one of four
treatments depending on how much data backs it:

* ``m == 0``: the zero probability ``1 - target**(1/n)``, used for all
  three bounds.
* ``1 <= m < small_count_cutoff``: exact tail-inversion (Clopper-Pearson)
  bounds found by bisection on the cumulative binomial.
* small ``m/n``: the quadratic solution of the normal approximation with
  ``1 - p`` taken as 1.
* otherwise the plain normal approximation, ``m/n +- d*sigma/n``.

The base value is ``m/n`` in every regime except the zero case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

BISECT_MAX_ITER = 200
BISECT_TOL = 1e-12


@dataclass(frozen=True)
class ProbabilityTriple:
    low: float
    base: float
    high: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.low <= self.base <= self.high <= 1.0:
            raise ValueError(f"invalid probability triple {self}")

    @classmethod
    def uniform(cls, p: float) -> ProbabilityTriple:
        return cls(p, p, p)

    @property
    def width(self) -> float:
        return self.high - self.low


@dataclass(frozen=True)
class EstimatorConfig:
    """Training-time estimation parameters.

    Attributes:
        d: Half-width of the normal intervals in standard deviations.
        small_count_cutoff: Counts below this use the exact binomial bounds.
        zero_target: Chance of seeing zero occurrences that defines the
            zero probability.
        large_count_base_cutoff: Base probability above which the refined
            quadratic form gives way to the plain normal form.
    """

    d: float = 2.0
    small_count_cutoff: int = 10
    zero_target: float = 0.95
    large_count_base_cutoff: float = 0.05

    def __post_init__(self) -> None:
        if not (self.d > 0 and math.isfinite(self.d)):
            raise ValueError(f"d must be positive, got {self.d}")
        if int(self.small_count_cutoff) != self.small_count_cutoff or self.small_count_cutoff < 1:
            raise ValueError(f"small_count_cutoff must be an integer >= 1, got {self.small_count_cutoff}")
        if not 0 < self.zero_target < 1:
            raise ValueError(f"zero_target must lie in (0, 1), got {self.zero_target}")
        if not 0 < self.large_count_base_cutoff < 1:
            raise ValueError(f"large_count_base_cutoff must lie in (0, 1), got {self.large_count_base_cutoff}")

    @property
    def alpha(self) -> float:
        """Two-sided tail mass matching ``d`` for the exact regime."""
        # d = 2 is the customary rounding of the 95% z-value (1.96).
        if self.d == 2.0:
            return 0.05
        return normal_two_sided_tail(self.d)


def normal_two_sided_tail(d: float) -> float:
    """``2 * (1 - Phi(d))`` for the standard normal ``Phi``."""
    return math.erfc(d / math.sqrt(2.0))


def _check_counts(m: int, n: int) -> None:
    if n < 1:
        raise ValueError(f"trial count must be >= 1, got n={n}")
    if not 0 <= m <= n:
        raise ValueError(f"count must satisfy 0 <= m <= n, got m={m}, n={n}")


def _check_d(d: float) -> None:
    if not d > 0:
        raise ValueError(f"d must be positive, got {d}")


def base_probability(m: int, n: int) -> float:
    _check_counts(m, n)
    return m / n


def normal_interval(m: int, n: int, d: float = 2.0) -> ProbabilityTriple:
    """Normal approximation to the binomial, ``(m +- d*sigma) / n``."""
    _check_counts(m, n)
    _check_d(d)
    base = m / n
    sigma = math.sqrt(n * base * (1.0 - base))
    low = max(0.0, (m - d * sigma) / n)
    high = min(1.0, (m + d * sigma) / n)
    return ProbabilityTriple(low, base, high)


def refined_interval(m: int, n: int, d: float = 2.0) -> ProbabilityTriple:
    """Bounds solving ``p = (m -+ d*sqrt(n*p)) / n`` in closed form.

    Each bound is substituted into its own standard deviation with
    ``1 - p`` approximated by 1, which is accurate for small ``m/n``.
    """
    _check_counts(m, n)
    _check_d(d)
    root = math.sqrt(d * d + 4.0 * m)
    low = (root - d) ** 2 / (4.0 * n)
    high = min(1.0, (root + d) ** 2 / (4.0 * n))
    return ProbabilityTriple(low, m / n, high)


def binomial_cdf(k: int, n: int, p: float) -> float:
    """``P(X <= k)`` for ``X ~ Binomial(n, p)`` by direct summation."""
    if k < 0:
        return 0.0
    if k >= n or p <= 0.0:
        return 1.0
    if p >= 1.0:
        return 0.0
    ratio = p / (1.0 - p)
    term = math.exp(n * math.log1p(-p))
    total = term
    for j in range(k):
        term *= (n - j) / (j + 1) * ratio
        total += term
    return min(total, 1.0)


def _bisect(func, target: float, increasing: bool) -> float:
    lo, hi = 0.0, 1.0
    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if (func(mid) < target) == increasing:
            lo = mid
        else:
            hi = mid
        # relative width; bounds can be ~1e-6 so a purely absolute stop is too coarse
        if hi - lo <= BISECT_TOL * hi:
            break
    return 0.5 * (lo + hi)


@lru_cache(maxsize=65536)
def _tail_bounds(m: int, n: int, alpha: float) -> tuple[float, float]:
    half = alpha / 2.0
    low = _bisect(lambda p: 1.0 - binomial_cdf(m - 1, n, p), half, increasing=True)
    if m == n:
        high = 1.0
    else:
        high = _bisect(lambda p: binomial_cdf(m, n, p), half, increasing=False)
    return low, high


def exact_small_count_interval(
    m: int, n: int, alpha: float = 0.05, small_count_cutoff: int = 10
) -> ProbabilityTriple:
    """Exact binomial bounds for a small positive count.

    ``low`` solves ``P(X >= m | n, p) = alpha/2`` and ``high`` solves
    ``P(X <= m | n, p) = alpha/2``; both tails are monotone in ``p`` so each
    root is unique.
    """
    _check_counts(m, n)
    if m == 0:
        raise ValueError("m = 0 is handled by zero_probability")
    if m >= small_count_cutoff:
        raise ValueError(f"m={m} is not below the small-count cutoff {small_count_cutoff}")
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    low, high = _tail_bounds(int(m), int(n), float(alpha))
    base = m / n
    # bisection midpoints can land an ulp on the wrong side of m/n
    return ProbabilityTriple(min(low, base), base, max(high, base))


def zero_probability(n: int, target: float = 0.95) -> float:
    """Probability ``p`` for which ``n`` trials show no occurrence with chance ``target``."""
    if n < 1:
        raise ValueError(f"trial count must be >= 1, got n={n}")
    if not 0 < target < 1:
        raise ValueError(f"target must lie in (0, 1), got {target}")
    return -math.expm1(math.log(target) / n)


def estimate(m: int, n: int, config: EstimatorConfig = EstimatorConfig()) -> ProbabilityTriple:
    _check_counts(m, n)
    if m == 0:
        return ProbabilityTriple.uniform(zero_probability(n, config.zero_target))
    if m < config.small_count_cutoff:
        return exact_small_count_interval(m, n, config.alpha, config.small_count_cutoff)
    if m / n <= config.large_count_base_cutoff:
        return refined_interval(m, n, config.d)
    return normal_interval(m, n, config.d)


def prior_probability(m: int, total: int, config: EstimatorConfig = EstimatorConfig()) -> float:
    """Pooled a-priori token probability; base value only."""
    _check_counts(m, total)
    if m == 0:
        return zero_probability(total, config.zero_target)
    return m / total
