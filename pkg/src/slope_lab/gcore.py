"""Generalized estimators, squared slope, and efficiencies.

A generalized estimator maps a sample to a smooth function of the
parameter, subject to three moment conditions at every theta: zero
mean, finite positive variance, and nonnegative covariance with the
score.  The squared slope

    Lambda(g) = (E g')^2 / V(g)

is the aggregate quantity used to rank estimators; it is bounded above
by the Fisher information, with the score attaining the bound.  The
slope of a point estimator is defined through its lift
h(y, theta) = u(y) - E_theta[u].

Expectations dispatch on the family's sample space: exact sums for the
finite Bernoulli support, adaptive quadrature for the one-dimensional
continuous families, and seeded Monte Carlo (with reported standard
error) for the full Cauchy sample space, which is the only genuinely
n-dimensional one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import BiasError, OrientationError, ZeroVarianceError
from .families import (
    Bernoulli,
    BivariateNormalSlice,
    CauchyLocation,
    CauchyMedian,
    Family,
    NormalLocation,
    median_fisher_info,
    median_variance,
)
from .errors import DivergentIntegralError
from .quadrature import integrate_real_line

KIND_SCORE = "score"
KIND_LIFTED = "lifted_point"
KIND_CUSTOM = "custom"

DEFAULT_MC_DRAWS = 10**6
_FD_STEP = 1e-5


def _fd_step(theta: float) -> float:
    return _FD_STEP * (1.0 + abs(theta))


def expect(
    f: Family,
    theta: float,
    phi: Callable,
    *,
    mc_draws: int = DEFAULT_MC_DRAWS,
    mc_seed: int = 0,
    return_se: bool = False,
):
    """E_theta[phi(Y)] under family ``f``.

    Bernoulli uses the exact binomial sum; the continuous scalar
    families use adaptive quadrature; the full Cauchy sample space uses
    seeded Monte Carlo.  With ``return_se=True`` the Monte Carlo
    standard error is returned alongside (0.0 for the exact engines).
    """
    f.check_param(theta)
    if isinstance(f, Bernoulli):
        w = f.pmf(theta)
        vals = np.array([phi(int(y)) for y in f.support()], dtype=float)
        value = float(np.dot(w, vals))
        return (value, 0.0) if return_se else value
    if isinstance(f, NormalLocation):
        value = integrate_real_line(lambda x: phi(x) * f.density(theta, x))
        return (value, 0.0) if return_se else value
    if isinstance(f, CauchyMedian):
        value = integrate_real_line(lambda z: phi(z) * f.density(theta, z))
        return (value, 0.0) if return_se else value
    if isinstance(f, BivariateNormalSlice):
        # product of two independent normal coordinates: Gauss-Hermite
        nodes, weights = np.polynomial.hermite_e.hermegauss(64)
        sd = 1.0 / math.sqrt(f.n)
        total = 0.0
        for a, wa in zip(nodes, weights):
            z1 = theta + sd * a
            row = sum(
                wb * phi((z1, sd * b)) for b, wb in zip(nodes, weights)
            )
            total += wa * row
        value = total / (2.0 * math.pi)
        return (value, 0.0) if return_se else value
    if isinstance(f, CauchyLocation):
        rng = np.random.Generator(np.random.Philox(key=[mc_seed, 0]))
        u = rng.random((mc_draws, f.n))
        x = np.sort(theta + np.tan(math.pi * (u - 0.5)), axis=1)
        vals = np.array([phi(x[i]) for i in range(mc_draws)], dtype=float)
        value = float(vals.mean())
        se = float(vals.std(ddof=1) / math.sqrt(mc_draws))
        return (value, se) if return_se else value
    raise TypeError(f"no expectation engine for family {type(f).__name__}")


def variance(f: Family, theta: float, phi: Callable, **kw) -> float:
    m = expect(f, theta, phi, **kw)
    return expect(f, theta, lambda y: (phi(y) - m) ** 2, **kw)


@dataclass
class GenEstimator:
    """A generalized estimator: sample -> function on the parameter space.

    ``evaluate(y, theta)`` is the defining map.  ``deriv`` is the
    analytic theta-derivative when one is available; otherwise slope
    computations fall back to central differences.  ``mean_fn`` /
    ``mean_deriv`` are the lift's mean function and its derivative for
    ``kind == "lifted_point"``.
    """

    family: Family
    evaluate: Callable
    kind: str = KIND_CUSTOM
    deriv: Optional[Callable] = None
    statistic: Optional[Callable] = None
    mean_fn: Optional[Callable] = None
    mean_deriv: Optional[Callable] = None

    def __call__(self, y, theta: float) -> float:
        return self.evaluate(y, theta)

    # -- moments ----------------------------------------------------

    def mean(self, theta: float, **kw) -> float:
        return expect(self.family, theta, lambda y: self.evaluate(y, theta), **kw)

    def var(self, theta: float, **kw) -> float:
        m = self.mean(theta, **kw)
        return expect(
            self.family, theta, lambda y: (self.evaluate(y, theta) - m) ** 2, **kw
        )

    def mean_slope(self, theta: float, **kw) -> float:
        """E[dg/dtheta] at theta; analytic derivative when available."""
        if self.deriv is not None:
            return expect(self.family, theta, lambda y: self.deriv(y, theta), **kw)
        h = _fd_step(theta)
        return expect(
            self.family,
            theta,
            lambda y: (self.evaluate(y, theta + h) - self.evaluate(y, theta - h))
            / (2.0 * h),
            **kw,
        )

    def score_cov(self, theta: float, **kw) -> float:
        fam = self.family
        return expect(
            fam,
            theta,
            lambda y: self.evaluate(y, theta) * fam.score(theta, y),
            **kw,
        )


def score_estimator(f: Family) -> GenEstimator:
    """The score as a generalized estimator (the Lambda-optimal one)."""
    return GenEstimator(family=f, evaluate=lambda y, th: f.score(th, y), kind=KIND_SCORE)


def lift_point_estimator(
    f: Family,
    u: Callable,
    mean_fn: Optional[Callable] = None,
    mean_deriv: Optional[Callable] = None,
    check_grid: Optional[Sequence[float]] = None,
    **kw,
) -> GenEstimator:
    """Lift a point statistic u into the generalized-estimator space.

    Returns h(y, theta) = u(y) - ups(theta) with ups(theta) = E_theta[u],
    computed through the expectation engine unless a closed form is
    supplied.  The orientation restriction E[h * score] >= 0 is checked
    on ``check_grid`` when given; a violation raises rather than
    silently negating the statistic.
    """
    ups = mean_fn if mean_fn is not None else (lambda th: expect(f, th, u, **kw))
    if mean_deriv is not None:
        dups = mean_deriv
    else:
        # d/dtheta E[u] = E[u * score]: exact whenever the expectation
        # engine is exact, unlike a finite difference of the mean
        def dups(th: float) -> float:
            return expect(f, th, lambda y: u(y) * f.score(th, y), **kw)

    est = GenEstimator(
        family=f,
        evaluate=lambda y, th: u(y) - ups(th),
        kind=KIND_LIFTED,
        deriv=lambda y, th: -dups(th),
        statistic=u,
        mean_fn=ups,
        mean_deriv=dups,
    )
    if check_grid is not None:
        for th in check_grid:
            cov = est.score_cov(th, **kw)
            if cov < -1e-8:
                raise OrientationError(
                    f"E[h * score] = {cov:.3e} < 0 at theta={th}; negate the statistic"
                )
    return est


def standardize(g: GenEstimator, theta: float, y, **kw) -> float:
    """g(y, theta) / sqrt(V_theta(g))."""
    v = g.var(theta, **kw)
    if not v > 0:
        raise ZeroVarianceError(f"variance {v} is not positive at theta={theta}")
    return g.evaluate(y, theta) / math.sqrt(v)


def squared_slope(g: GenEstimator, theta: float, **kw) -> float:
    """Lambda(g)(theta) = (E g')^2 / V(g).

    The score attains Lambda = I, which is returned through the closed
    form; lifted estimators with a constant mean function have slope 0.
    """
    if g.kind == KIND_SCORE:
        return g.family.fisher_info(theta)
    num = g.mean_slope(theta, **kw)
    v = g.var(theta, **kw)
    if not v > 0:
        raise ZeroVarianceError(f"variance {v} is not positive at theta={theta}")
    return num * num / v


def score_correlation2(g: GenEstimator, theta: float, **kw) -> float:
    """rho^2(g, score) = (E[g * score])^2 / (V(g) * I)."""
    if g.kind == KIND_SCORE:
        return 1.0
    v = g.var(theta, **kw)
    if not v > 0:
        raise ZeroVarianceError(f"variance {v} is not positive at theta={theta}")
    cov = g.score_cov(theta, **kw)
    info = g.family.fisher_info(theta)
    return cov * cov / (v * info)


def reference_info(f: Family, theta: float) -> float:
    """Information benchmark for efficiency: the full-sample information.

    For a family defined on a reduced statistic (the Cauchy median law)
    this is the information n*I1 of the underlying n observations, so
    that efficiencies quantify the loss from the reduction; for families
    on the full sample space it coincides with the family information.
    """
    if isinstance(f, CauchyMedian):
        return f.n / 2.0
    return f.fisher_info(theta)


def lambda_efficiency(g: GenEstimator, theta: float, **kw) -> float:
    """Eff^Lambda(g) = Lambda(g) / I, with I the full-sample information.

    On a full sample space this equals rho^2(g, score); on the median
    reduction it additionally charges the information lost by reducing
    the sample to its median.
    """
    return squared_slope(g, theta, **kw) / reference_info(g.family, theta)


def v_efficiency(f: Family, u: Callable, theta: float, tol: float = 1e-8, **kw) -> float:
    """Variance efficiency I^{-1} / V(u) of an unbiased statistic u."""
    bias = expect(f, theta, u, **kw) - theta
    if abs(bias) > tol:
        raise BiasError(f"u is biased at theta={theta}: bias={bias:.3e}")
    v = variance(f, theta, u, **kw)
    return 1.0 / (f.fisher_info(theta) * v)


def effective_n(g: GenEstimator, theta: float, **kw) -> float:
    """The full-sample size at which the optimal estimator matches g's slope."""
    return lambda_efficiency(g, theta, **kw) * g.family.n


def check_identity(g: GenEstimator, theta: float, **kw) -> float:
    """Residual |-E g' - E(g * score)| of the differentiation identity.

    Both sides are computed through independent routes: the left side
    uses the closed-form information for the score estimator and
    central differences otherwise; the right side is always the
    score-covariance expectation.  A lifted estimator's analytic
    ``deriv`` is deliberately not used here, since for lifts it is
    itself derived from a score covariance and would make the check
    circular.
    """
    if g.kind == KIND_SCORE:
        lhs = g.family.fisher_info(theta)
    elif g.deriv is not None and g.kind != KIND_LIFTED:
        lhs = -expect(g.family, theta, lambda y: g.deriv(y, theta), **kw)
    else:
        h = _fd_step(theta)
        lhs = -expect(
            g.family,
            theta,
            lambda y: (g.evaluate(y, theta + h) - g.evaluate(y, theta - h)) / (2.0 * h),
            **kw,
        )
    rhs = g.score_cov(theta, **kw)
    return abs(lhs - rhs)


@dataclass
class SlopeReport:
    """Slope diagnostics for one estimator over a parameter grid."""

    grid: np.ndarray
    lam: np.ndarray
    rho2: np.ndarray
    eff_lambda: np.ndarray
    eff_n: np.ndarray
    identity_residual: np.ndarray


def slope_report(g: GenEstimator, grid: Sequence[float], **kw) -> SlopeReport:
    grid = np.asarray(grid, dtype=float)
    lam = np.array([squared_slope(g, th, **kw) for th in grid])
    rho2 = np.array([score_correlation2(g, th, **kw) for th in grid])
    eff = np.array([lambda_efficiency(g, th, **kw) for th in grid])
    en = np.array([effective_n(g, th, **kw) for th in grid])
    resid = np.array([check_identity(g, th, **kw) for th in grid])
    return SlopeReport(grid, lam, rho2, eff, en, resid)


def default_grid(f: Family, points: int = 41) -> np.ndarray:
    """Default evaluation grid: p in [0.02, 0.98] or theta in [-4, 4]."""
    if isinstance(f, Bernoulli) and f.chart == "p":
        return np.linspace(0.02, 0.98, points)
    return np.linspace(-4.0, 4.0, points)


# ---------------------------------------------------------------------------
# Deterministic reproduction of the Cauchy median table and the
# Bernoulli efficiency curves.
# ---------------------------------------------------------------------------


@dataclass
class CauchyTableRow:
    """One row of the Cauchy median comparison table.

    ``lam_median`` is the squared slope of the median as a point
    estimate (1 / Var(median)), reported as 0 with ``variance_diverges``
    set when the variance does not exist (n in {1, 3}).  ``lam_median_score``
    is the information in the median law; ``lam_full_score`` = n/2.
    Efficiencies are percentages; effective sample sizes are on the
    n-observation scale.
    """

    n: int
    lam_median: float
    lam_median_score: float
    lam_full_score: float
    eff_median: float
    eff_median_score: float
    n_median: float
    n_median_score: float
    variance_diverges: bool = field(default=False)


def cauchy_table_row(n: int) -> CauchyTableRow:
    if n < 1 or n % 2 == 0 or n > 31:
        raise ValueError(f"n must be an odd integer in [1, 31], got {n}")
    k = (n - 1) // 2
    lam_full = n / 2.0
    lam_med_score = median_fisher_info(k)
    diverges = False
    try:
        lam_med = 1.0 / median_variance(k)
    except DivergentIntegralError:
        lam_med = 0.0
        diverges = True
    eff_med = lam_med / lam_full
    eff_med_score = lam_med_score / lam_full
    return CauchyTableRow(
        n=n,
        lam_median=lam_med,
        lam_median_score=lam_med_score,
        lam_full_score=lam_full,
        eff_median=100.0 * eff_med,
        eff_median_score=100.0 * eff_med_score,
        n_median=n * eff_med,
        n_median_score=n * eff_med_score,
        variance_diverges=diverges,
    )


def bernoulli_efficiency_curves(n: int = 10, grid: Optional[Sequence[float]] = None):
    """Lambda-efficiency of u1=y, u2=y(y-1), u3=y^2 over a p grid.

    Everything is an exact binomial sum, so the output is fully
    deterministic.  Returns (p_grid, eff_y, eff_yy1, eff_y2).
    """
    f = Bernoulli(n)
    if grid is None:
        grid = np.linspace(0.02, 0.98, 97)
    grid = np.asarray(grid, dtype=float)
    stats = [lambda y: float(y), lambda y: float(y * (y - 1)), lambda y: float(y * y)]
    effs = np.empty((3, grid.size))
    for j, u in enumerate(stats):
        est = lift_point_estimator(f, u)
        effs[j] = [lambda_efficiency(est, p) for p in grid]
    return grid, effs[0], effs[1], effs[2]
