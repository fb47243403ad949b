"""Confidence intervals from generalized estimates.

Four constructions:

* score inversion: {theta : -k < sbar(theta) < k} for the standardized
  score, solved by bisection (may not exist for the Cauchy score, whose
  standardized value tends to 0 in both tails);
* likelihood-ratio inversion: the level set {theta : S(theta) > -z^2}
  of S(theta) = 2(l(theta) - l(theta_hat));
* Wald linearizations theta_hat +/- z / sqrt(info) with either the
  expected or the observed information as the slope;
* the exact Bernoulli interval obtained by inverting binomial tail
  areas, which coincides with the Clopper-Pearson interval.

The Cauchy likelihood can be multimodal, so the global maximizer is
found by a dense grid scan before any local refinement, and the LRT
level set is reported as its connected hull with a flag when it is
actually a union of intervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (
    BracketError,
    CurvatureError,
    DomainError,
    NonexistenceError,
    NonMonotoneError,
)
from .families import Bernoulli, CauchyLocation, CauchyMedian, Family, NormalLocation

METHOD_SCORE = "score_inversion"
METHOD_LRT = "lrt"
METHOD_WALD_EXPECTED = "wald_expected"
METHOD_WALD_OBSERVED = "wald_observed"
METHOD_EXACT_BERNOULLI = "exact_bernoulli"

_THETA_TOL = 1e-10
_MAX_DOUBLINGS = 60


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    method: str
    level_k: float
    slope_b: Optional[float] = None
    adjustment: float = 1.0
    disconnected: bool = False

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"degenerate interval ({self.lo}, {self.hi})")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, theta: float) -> bool:
        return self.lo < theta < self.hi


# ---------------------------------------------------------------------------
# Cauchy maximum likelihood
# ---------------------------------------------------------------------------


def _cauchy_loglik_many(x: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """Cauchy log-likelihood (constants dropped) at many thetas."""
    ll = np.zeros_like(thetas, dtype=float)
    for xi in x:
        ll -= np.log1p((xi - thetas) ** 2)
    return ll


def _cauchy_score_many(x: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    s = np.zeros_like(thetas, dtype=float)
    for xi in x:
        t = xi - thetas
        s += 2.0 * t / (t * t + 1.0)
    return s


def cauchy_mle(y) -> float:
    """Global maximizer of the Cauchy location log-likelihood.

    Dense scan over [x_(1), x_(n)] at resolution range/2000 (plus the
    sample points themselves), then local refinement down to 1e-10.
    The likelihood has at most 2n-1 stationary points, all inside the
    sample range, so the scan cannot miss the global mode by more than
    one grid cell.
    """
    x = np.sort(np.asarray(y, dtype=float).ravel())
    if x.size == 0:
        raise DomainError("empty sample")
    if not np.all(np.isfinite(x)):
        raise DomainError("non-finite observation")
    if x.size == 1 or x[0] == x[-1]:
        return float(x[0])
    step = (x[-1] - x[0]) / 2000.0
    cand = np.concatenate([x[0] + step * np.arange(2001), x])
    ll = _cauchy_loglik_many(x, cand)
    order = np.lexsort((cand, -ll))  # best loglik first, then smaller theta
    theta0 = float(cand[order[0]])
    return _refine_cauchy_max(x, theta0, step)


def _refine_cauchy_max(x: np.ndarray, theta0: float, h: float) -> float:
    # grid refinement until the bracket is tight enough for the score
    # to change sign exactly once, then derivative bisection
    for _ in range(4):
        grid = theta0 + h * np.linspace(-1.0, 1.0, 65)
        ll = _cauchy_loglik_many(x, grid)
        theta0 = float(grid[int(np.argmax(ll))])
        h /= 16.0
    lo, hi = theta0 - 16.0 * h, theta0 + 16.0 * h
    s_lo = float(_cauchy_score_many(x, np.array([lo]))[0])
    s_hi = float(_cauchy_score_many(x, np.array([hi]))[0])
    if not (s_lo > 0.0 > s_hi):
        # numerically flat around the max; the grid value is already
        # within ~1e-6 of the stationary point
        return theta0
    while hi - lo > _THETA_TOL:
        mid = 0.5 * (lo + hi)
        if _cauchy_score_many(x, np.array([mid]))[0] > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def family_mle(f: Family, y) -> float:
    """Maximum-likelihood point estimate (may lie on the closure for
    Bernoulli boundary counts)."""
    if isinstance(f, Bernoulli):
        p_hat = y / f.n
        if f.chart == "p":
            return float(p_hat)
        if y in (0, f.n):
            return math.copysign(math.inf, y - f.n / 2)
        return math.log(p_hat / (1.0 - p_hat))
    if isinstance(f, NormalLocation):
        return float(y)
    if isinstance(f, CauchyLocation):
        return cauchy_mle(y)
    if isinstance(f, CauchyMedian):
        return float(y)
    raise TypeError(f"no MLE rule for {type(f).__name__}")


def observed_info(f: Family, theta_hat: float, y) -> float:
    """Observed information -l''(theta_hat; y)."""
    if isinstance(f, CauchyLocation):
        t = np.asarray(y, dtype=float) - theta_hat
        val = float(np.sum(2.0 * (1.0 - t * t) / (t * t + 1.0) ** 2))
    elif isinstance(f, NormalLocation):
        val = f.n / f.sigma**2
    else:
        h = 1e-5 * (1.0 + abs(theta_hat))
        val = -(f.score(theta_hat + h, y) - f.score(theta_hat - h, y)) / (2.0 * h)
    if val <= 0.0:
        raise CurvatureError(f"observed information {val} is not positive")
    return val


# ---------------------------------------------------------------------------
# Score inversion
# ---------------------------------------------------------------------------


def _score_bracket(f: Family, width_doublings: int):
    """Successive search brackets: theta_hat +/- 50/sqrt(I), doubled, or
    the shrinking interior of a bounded chart domain."""
    lo_dom, hi_dom = f.param_domain()
    if math.isfinite(lo_dom) and math.isfinite(hi_dom):
        margin = 0.01 * (hi_dom - lo_dom) / 2.0**width_doublings
        return lo_dom + margin, hi_dom - margin
    center = 0.0
    half = 50.0 / math.sqrt(f.fisher_info(0.0)) * 2.0**width_doublings
    return center - half, center + half


def score_interval(f: Family, y, k: float) -> Interval:
    """Invert the standardized score: {theta : -k < sbar(theta) < k}.

    Requires sbar to be monotone over the bracket (checked by sign
    sampling at 64 points); raises NonexistenceError when sbar never
    reaches +/-k, which happens for the Cauchy score whose value decays
    to zero in both tails.
    """
    if k <= 0:
        raise DomainError(f"level k must be positive, got {k}")

    def sbar(theta: float) -> float:
        return f.score(theta, y) / math.sqrt(f.fisher_info(theta))

    lo_dom, hi_dom = f.param_domain()
    bounded = math.isfinite(lo_dom) and math.isfinite(hi_dom)
    for doubling in range(_MAX_DOUBLINGS):
        lo_b, hi_b = _score_bracket(f, doubling)
        grid = np.linspace(lo_b, hi_b, 64)
        vals = np.array([sbar(t) for t in grid])
        if vals[0] >= k and vals[-1] <= -k:
            if np.any(np.diff(vals) > 1e-9 * (1.0 + np.abs(vals[:-1]))):
                raise NonMonotoneError(
                    "standardized score is not decreasing over the bracket"
                )
            lo = _bisect_decreasing(sbar, grid, vals, k)
            hi = _bisect_decreasing(sbar, grid, vals, -k)
            return Interval(lo=lo, hi=hi, method=METHOD_SCORE, level_k=k)
        # the levels are not reached at the bracket ends; decide between
        # expanding further (score still growing outward) and declaring
        # nonexistence (score decaying toward 0 in the tails)
        interior_max = float(np.max(np.abs(vals[1:-1]))) if vals.size > 2 else 0.0
        ends_max = max(abs(vals[0]), abs(vals[-1]))
        if interior_max < k and ends_max <= interior_max and doubling >= 2:
            raise NonexistenceError(
                f"standardized score never reaches +/-{k}; its peak over the "
                f"bracket is {interior_max:.4g}"
            )
        if bounded and doubling > 20:
            break
    raise NonexistenceError(
        f"standardized score never reaches +/-{k} over the search bracket"
    )


def _bisect_decreasing(fn: Callable, grid: np.ndarray, vals: np.ndarray, level: float) -> float:
    idx = int(np.searchsorted(-vals, -level))
    idx = min(max(idx, 1), grid.size - 1)
    lo, hi = float(grid[idx - 1]), float(grid[idx])
    while hi - lo > _THETA_TOL:
        mid = 0.5 * (lo + hi)
        if fn(mid) > level:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Likelihood-ratio inversion
# ---------------------------------------------------------------------------


@dataclass
class LrtEstimate:
    """S(theta) = 2(l(theta) - sup l): nonpositive, zero at the MLE."""

    family: Family
    sample: object
    mle: float
    sup_loglik: float

    def __call__(self, theta: float) -> float:
        return 2.0 * (self.family.loglik(theta, self.sample) - self.sup_loglik)


def lrt_estimate(f: Family, y) -> LrtEstimate:
    mle = family_mle(f, y)
    if isinstance(f, Bernoulli):
        # sup over the closed [0, 1]: 0 log 0 = 0 convention
        p_hat = y / f.n
        sup = 0.0
        if 0 < y:
            sup += y * math.log(p_hat)
        if y < f.n:
            sup += (f.n - y) * math.log1p(-p_hat)
    else:
        sup = f.loglik(mle, y)
    return LrtEstimate(family=f, sample=y, mle=mle, sup_loglik=sup)


def lrt_interval(L: LrtEstimate, z: float, adjustment: float = 1.0) -> Interval:
    """Connected hull of {theta : S(theta) > -(adjustment*z)^2}.

    Endpoints are the outermost roots of S = -z^2, located by geometric
    bracket expansion away from the MLE, an outward scan for the last
    point still inside the set, and bisection.  ``disconnected`` is set
    when the scan sees the set re-enter, i.e. the level set is a union
    of intervals and the hull is reported.
    """
    z_eff = adjustment * z
    if z_eff <= 0:
        raise DomainError(f"level z must be positive, got {z_eff}")
    target = -z_eff * z_eff
    center = L.mle
    lo_dom, hi_dom = L.family.param_domain()
    # every stationary point of the implemented log-likelihoods lies
    # inside the sample range, so pushing the bracket past the extreme
    # observations guarantees the outermost crossing is enclosed even
    # when the level set is a union of intervals
    s_arr = np.asarray(L.sample, dtype=float)
    data_lo = float(s_arr.min()) if s_arr.ndim == 1 and s_arr.size else None
    data_hi = float(s_arr.max()) if s_arr.ndim == 1 and s_arr.size else None
    disconnected = False
    endpoints = []
    for sgn in (-1.0, 1.0):
        dom = lo_dom if sgn < 0 else hi_dom
        step = 0.5 * (1.0 + abs(center))
        far = None
        for i in range(_MAX_DOUBLINGS):
            cand = center + sgn * step * 2.0**i
            if math.isfinite(dom):
                cand = center + (dom - center) * (1.0 - 2.0 ** -(i + 1))
            elif data_lo is not None:
                past = data_hi if sgn > 0 else data_lo
                if sgn * (cand - past) < 0.0:
                    continue
            if L(cand) < target:
                far = cand
                break
        if far is None:
            raise BracketError(
                f"no point with S < {target:.4g} found after {_MAX_DOUBLINGS} doublings"
            )
        # outward scan so bisection lands on the outermost crossing
        scan = np.linspace(center, far, 513)
        inside = np.array([L(t) > target for t in scan])
        last_in = int(np.nonzero(inside)[0][-1])
        if not inside[: last_in + 1].all():
            disconnected = True
        lo_b, hi_b = float(scan[last_in]), float(scan[last_in + 1])
        while abs(hi_b - lo_b) > _THETA_TOL:
            mid = 0.5 * (lo_b + hi_b)
            if L(mid) > target:
                lo_b = mid
            else:
                hi_b = mid
        endpoints.append(0.5 * (lo_b + hi_b))
    lo, hi = sorted(endpoints)
    return Interval(
        lo=lo,
        hi=hi,
        method=METHOD_LRT,
        level_k=z,
        adjustment=adjustment,
        disconnected=disconnected,
    )


# ---------------------------------------------------------------------------
# Wald linearizations and the exact Bernoulli interval
# ---------------------------------------------------------------------------


def wald_interval(
    theta_hat: float,
    info: float,
    z: float,
    adjustment: float = 1.0,
    method: str = METHOD_WALD_EXPECTED,
) -> Interval:
    """theta_hat +/- adjustment * z / sqrt(info)."""
    if info <= 0:
        raise DomainError(f"information must be positive, got {info}")
    half = adjustment * z / math.sqrt(info)
    return Interval(
        lo=theta_hat - half,
        hi=theta_hat + half,
        method=method,
        level_k=z,
        slope_b=-math.sqrt(info),
        adjustment=adjustment,
    )


def _binom_sf_at_least(n: int, y: int, p: float) -> float:
    """P_p(Y >= y), exact sum of binomial terms."""
    from scipy.stats import binom

    return float(binom.sf(y - 1, n, p))


def _binom_cdf_at_most(n: int, y: int, p: float) -> float:
    from scipy.stats import binom

    return float(binom.cdf(y, n, p))


def exact_bernoulli_interval(n: int, y: int, alpha: float) -> Interval:
    """Invert exact binomial tail areas at alpha/2 per side.

    lo = sup{p : P_p(Y >= y) <= alpha/2}, hi = inf{p : P_p(Y <= y) <= alpha/2},
    with lo = 0 at y = 0 and hi = 1 at y = n.  This is the score-ordering
    exact interval, i.e. the Clopper-Pearson interval.
    """
    if not 0 <= y <= n:
        raise DomainError(f"y={y} outside [0, {n}]")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha={alpha} outside (0, 1)")
    half = alpha / 2.0
    if y == 0:
        lo = 0.0
    else:
        a, b = 0.0, 1.0
        while b - a > _THETA_TOL:
            mid = 0.5 * (a + b)
            if _binom_sf_at_least(n, y, mid) <= half:
                a = mid
            else:
                b = mid
        lo = 0.5 * (a + b)
    if y == n:
        hi = 1.0
    else:
        a, b = 0.0, 1.0
        while b - a > _THETA_TOL:
            mid = 0.5 * (a + b)
            if _binom_cdf_at_most(n, y, mid) <= half:
                b = mid
            else:
                a = mid
        hi = 0.5 * (a + b)
    return Interval(lo=lo, hi=hi, method=METHOD_EXACT_BERNOULLI, level_k=alpha)
