"""One-parameter families: densities, scores, information, samplers.

Four concrete families are provided:

* ``Bernoulli(n)`` -- n coin flips reduced to the success count
  ``y in {0..n}``; parameterized either by the success probability
  (chart ``"p"``) or by the log odds (chart ``"log_odds"``).
* ``NormalLocation(sigma, n)`` -- normal mean with known sigma, sample
  reduced to the sufficient mean ``xbar``.
* ``CauchyLocation(n)`` -- standard Cauchy shifted by theta; no
  sufficient reduction exists, the sample is the full sorted vector.
* ``CauchyMedian(k)`` -- the sampling law of the median of 2k+1
  standard Cauchy observations.

``BivariateNormalSlice`` is a small fifth family used to demonstrate
that the squared slope separates estimators that bias and variance
cannot: a one-parameter slice of the zero-correlation bivariate normal
where the parameter moves only the first coordinate.

Log-likelihoods drop additive constants that do not depend on the
parameter (k(n,y) = 0 convention); scores, information, and slope
quantities are invariant to this choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import gammaln

from .errors import DomainError
from .quadrature import integrate_real_line, integrate_real_line_or_divergent

Sample = Union[int, float, np.ndarray, tuple]

CHART_P = "p"
CHART_LOG_ODDS = "log_odds"
CHART_THETA = "theta"


def reparam(family: "Family", from_chart: str, to_chart: str, value: float) -> float:
    """Map a parameter value between admissible charts of ``family``.

    For Bernoulli this is the log-odds bijection p -> log(p/(1-p)) and
    its inverse; all other families admit only the identity chart.
    """
    charts = family.charts
    if from_chart not in charts or to_chart not in charts:
        raise DomainError(
            f"charts ({from_chart!r}, {to_chart!r}) not admissible for {family}"
        )
    if from_chart == to_chart:
        return value
    if from_chart == CHART_P:
        if not 0.0 < value < 1.0:
            raise DomainError(f"p={value} outside (0, 1)")
        return math.log(value / (1.0 - value))
    # log_odds -> p
    return 1.0 / (1.0 + math.exp(-value))


def median_density(k: int, z: float, theta: float) -> float:
    """Density of the median of 2k+1 iid standard Cauchy draws at z.

    The factorial ratio (2k+1)!/(k!)^2 is computed through log-gamma so
    large k does not overflow.
    """
    if k < 0 or k != int(k):
        raise DomainError(f"k must be a nonnegative integer, got {k}")
    t = np.asarray(z, dtype=float) - theta
    log_c = gammaln(2 * k + 2) - 2.0 * gammaln(k + 1) - math.log(math.pi)
    bracket = 0.25 - np.arctan(t) ** 2 / math.pi**2
    with np.errstate(divide="ignore"):
        log_f = log_c + k * np.log(bracket) - np.log1p(t * t)
    out = np.exp(log_f)
    if np.ndim(z) == 0:
        return float(out)
    return out


def _median_dlog_dtheta(k: int, t: np.ndarray) -> np.ndarray:
    """d/dtheta log f_med(z; theta) expressed in t = z - theta."""
    a = np.arctan(t)
    bracket = 0.25 - a * a / math.pi**2
    return (2.0 * k * a / (math.pi**2 * bracket) + 2.0 * t) / (1.0 + t * t)


class Family:
    """Base class; concrete families implement the likelihood triple.

    Subclasses provide ``loglik``, ``score``, ``fisher_info``, and
    ``sample``; the base class owns domain checking and chart metadata.
    """

    charts: tuple = (CHART_THETA,)
    chart: str = CHART_THETA

    def param_domain(self) -> tuple:
        return (-math.inf, math.inf)

    def check_param(self, theta: float) -> None:
        lo, hi = self.param_domain()
        if not (lo < theta < hi) or not np.isfinite(theta):
            raise DomainError(f"parameter {theta} outside open domain ({lo}, {hi})")

    def check_sample(self, y: Sample) -> None:
        raise NotImplementedError

    def loglik(self, theta: float, y: Sample) -> float:
        raise NotImplementedError

    def score(self, theta: float, y: Sample) -> float:
        raise NotImplementedError

    def fisher_info(self, theta: float) -> float:
        raise NotImplementedError

    def sample(self, theta: float, rng: np.random.Generator) -> Sample:
        raise NotImplementedError


@dataclass(frozen=True)
class Bernoulli(Family):
    """n Bernoulli trials reduced to the success count y."""

    n: int
    chart: str = CHART_P

    charts = (CHART_P, CHART_LOG_ODDS)

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be positive, got {self.n}")
        if self.chart not in self.charts:
            raise DomainError(f"unknown chart {self.chart!r}")

    def param_domain(self) -> tuple:
        if self.chart == CHART_P:
            return (0.0, 1.0)
        return (-math.inf, math.inf)

    def support(self) -> np.ndarray:
        return np.arange(self.n + 1)

    def _p(self, theta: float) -> float:
        if self.chart == CHART_P:
            return theta
        return 1.0 / (1.0 + math.exp(-theta))

    def check_sample(self, y: Sample) -> None:
        if y != int(y) or not 0 <= y <= self.n:
            raise DomainError(f"y={y} not an integer in [0, {self.n}]")

    def pmf(self, theta: float, y=None) -> np.ndarray:
        """Exact binomial weights over the support (or at a given y)."""
        self.check_param(theta)
        p = self._p(theta)
        ys = self.support() if y is None else np.asarray(y)
        log_pmf = (
            gammaln(self.n + 1)
            - gammaln(ys + 1)
            - gammaln(self.n - ys + 1)
            + ys * math.log(p)
            + (self.n - ys) * math.log1p(-p)
        )
        return np.exp(log_pmf)

    def loglik(self, theta: float, y: Sample) -> float:
        self.check_param(theta)
        self.check_sample(y)
        p = self._p(theta)
        if self.chart == CHART_P:
            return y * math.log(p) + (self.n - y) * math.log1p(-p)
        # in the log-odds chart:  y*theta - n*log(1 + e^theta)
        return y * theta - self.n * (theta + math.log1p(math.exp(-theta)) if theta > 0
                                     else math.log1p(math.exp(theta)))

    def score(self, theta: float, y: Sample) -> float:
        self.check_param(theta)
        self.check_sample(y)
        p = self._p(theta)
        if self.chart == CHART_P:
            return (y - self.n * p) / (p * (1.0 - p))
        return y - self.n * p

    def fisher_info(self, theta: float) -> float:
        self.check_param(theta)
        p = self._p(theta)
        if self.chart == CHART_P:
            return self.n / (p * (1.0 - p))
        return self.n * p * (1.0 - p)

    def sample(self, theta: float, rng: np.random.Generator) -> int:
        self.check_param(theta)
        p = self._p(theta)
        return int(np.count_nonzero(rng.random(self.n) < p))


@dataclass(frozen=True)
class NormalLocation(Family):
    """Normal mean family with known sigma; sample reduced to xbar."""

    sigma: float
    n: int

    def __post_init__(self):
        if self.sigma <= 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        if self.n < 1:
            raise DomainError(f"n must be positive, got {self.n}")

    def check_sample(self, y: Sample) -> None:
        if not np.isfinite(y):
            raise DomainError(f"xbar={y} is not finite")

    def loglik(self, theta: float, y: Sample) -> float:
        self.check_param(theta)
        self.check_sample(y)
        return -self.n * (y - theta) ** 2 / (2.0 * self.sigma**2)

    def score(self, theta: float, y: Sample) -> float:
        self.check_param(theta)
        self.check_sample(y)
        return self.n * (y - theta) / self.sigma**2

    def fisher_info(self, theta: float) -> float:
        self.check_param(theta)
        return self.n / self.sigma**2

    def sample(self, theta: float, rng: np.random.Generator) -> float:
        self.check_param(theta)
        return float(rng.normal(theta, self.sigma / math.sqrt(self.n)))

    def density(self, theta: float, xbar) -> np.ndarray:
        sd = self.sigma / math.sqrt(self.n)
        z = (np.asarray(xbar, dtype=float) - theta) / sd
        return np.exp(-0.5 * z * z) / (sd * math.sqrt(2.0 * math.pi))


@dataclass(frozen=True)
class CauchyLocation(Family):
    """Standard Cauchy shifted by theta; the sample is the full vector."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be positive, got {self.n}")

    def check_sample(self, y: Sample) -> None:
        x = np.asarray(y, dtype=float)
        if x.shape != (self.n,):
            raise DomainError(f"expected {self.n} observations, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise DomainError("non-finite observation")
        if np.any(np.diff(x) < 0):
            raise DomainError("observations must be sorted ascending")

    def loglik(self, theta: float, y: Sample) -> float:
        self.check_param(theta)
        self.check_sample(y)
        t = np.asarray(y, dtype=float) - theta
        return float(-np.sum(np.log1p(t * t)) - self.n * math.log(math.pi))

    def score(self, theta: float, y: Sample) -> float:
        self.check_param(theta)
        self.check_sample(y)
        t = np.asarray(y, dtype=float) - theta
        return float(np.sum(2.0 * t / (t * t + 1.0)))

    def fisher_info(self, theta: float) -> float:
        self.check_param(theta)
        return self.n / 2.0

    def sample(self, theta: float, rng: np.random.Generator) -> np.ndarray:
        self.check_param(theta)
        u = rng.random(self.n)
        x = theta + np.tan(math.pi * (u - 0.5))
        return np.sort(x)


@dataclass(frozen=True)
class CauchyMedian(Family):
    """Sampling law of the median of a Cauchy sample of size 2k+1."""

    k: int

    def __post_init__(self):
        if self.k < 0:
            raise DomainError(f"k must be nonnegative, got {self.k}")

    @property
    def n(self) -> int:
        """Size of the underlying full sample."""
        return 2 * self.k + 1

    def check_sample(self, y: Sample) -> None:
        if not np.isfinite(y):
            raise DomainError(f"z={y} is not finite")

    def density(self, theta: float, z) -> np.ndarray:
        return median_density(self.k, z, theta)

    def loglik(self, theta: float, y: Sample) -> float:
        self.check_param(theta)
        self.check_sample(y)
        return float(np.log(median_density(self.k, y, theta)))

    def score(self, theta: float, y: Sample) -> float:
        self.check_param(theta)
        self.check_sample(y)
        return float(_median_dlog_dtheta(self.k, np.asarray(y, dtype=float) - theta))

    def fisher_info(self, theta: float) -> float:
        self.check_param(theta)
        return median_fisher_info(self.k)

    def sample(self, theta: float, rng: np.random.Generator) -> float:
        self.check_param(theta)
        u = rng.random(self.n)
        return float(np.median(theta + np.tan(math.pi * (u - 0.5))))


@dataclass(frozen=True)
class BivariateNormalSlice(Family):
    """One-parameter slice of the unit bivariate normal, mean (theta, 0).

    The sample is the pair of coordinate means (z1, z2), each with
    variance 1/n.  The score depends only on z1; statistics of z2 have
    zero slope here even though their variance attains the usual lower
    bound, which is the point of the demonstration.
    """

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be positive, got {self.n}")

    def check_sample(self, y: Sample) -> None:
        z1, z2 = y
        if not (np.isfinite(z1) and np.isfinite(z2)):
            raise DomainError("non-finite sample")

    def loglik(self, theta: float, y: Sample) -> float:
        self.check_param(theta)
        z1, z2 = y
        return -self.n * ((z1 - theta) ** 2 + z2 * z2) / 2.0

    def score(self, theta: float, y: Sample) -> float:
        self.check_param(theta)
        z1, _ = y
        return self.n * (z1 - theta)

    def fisher_info(self, theta: float) -> float:
        self.check_param(theta)
        return float(self.n)

    def sample(self, theta: float, rng: np.random.Generator) -> tuple:
        self.check_param(theta)
        sd = 1.0 / math.sqrt(self.n)
        return (float(rng.normal(theta, sd)), float(rng.normal(0.0, sd)))


# Module-level cache: the median information and variance are pure
# functions of k and each costs an adaptive quadrature.
_MEDIAN_INFO_CACHE: dict = {}
_MEDIAN_VAR_CACHE: dict = {}


def median_fisher_info(k: int) -> float:
    """Fisher information of the median law, by quadrature."""
    if k not in _MEDIAN_INFO_CACHE:
        def integrand(t: float) -> float:
            return _median_dlog_dtheta(k, np.asarray(t)) ** 2 * median_density(k, t, 0.0)

        _MEDIAN_INFO_CACHE[k] = integrate_real_line(integrand)
    return _MEDIAN_INFO_CACHE[k]


def median_variance(k: int) -> float:
    """Variance of the median law; raises DivergentIntegralError for k < 2."""
    if k not in _MEDIAN_VAR_CACHE:
        def integrand(t: float) -> float:
            return t * t * median_density(k, t, 0.0)

        _MEDIAN_VAR_CACHE[k] = integrate_real_line_or_divergent(integrand)
    return _MEDIAN_VAR_CACHE[k]
