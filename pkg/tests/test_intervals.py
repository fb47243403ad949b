"""Interval constructions: MLE search, score/LRT inversion, Wald, exact."""

import math

import numpy as np
import pytest
from scipy import stats

import slope_lab as sl

RNG = lambda seed: np.random.Generator(np.random.Philox(key=[seed, 0]))
Z95 = stats.norm.ppf(0.975)


class TestCauchyMle:
    def test_single_observation(self):
        assert sl.cauchy_mle([3.7]) == 3.7

    def test_two_symmetric_observations(self):
        # loglik is symmetric about 0 with a mode there for |x| < 1
        assert sl.cauchy_mle([-0.5, 0.5]) == pytest.approx(0.0, abs=1e-9)

    def test_two_far_observations_bimodal_picks_smaller(self):
        # for |x| > 1 the midpoint is a local min and the two modes are
        # symmetric; ties break toward the smaller theta
        theta = sl.cauchy_mle([-3.0, 3.0])
        assert theta < 0
        mode = math.sqrt(9.0 - 1.0)
        assert theta == pytest.approx(-mode, abs=1e-8)

    def test_score_zero_at_mle(self):
        x = np.sort(stats.cauchy.rvs(loc=1.5, size=15, random_state=7))
        th = sl.cauchy_mle(x)
        f = sl.CauchyLocation(15)
        assert f.score(th, x) == pytest.approx(0.0, abs=1e-6)

    @pytest.mark.parametrize("seed", range(20))
    def test_brute_force_oracle(self, seed):
        x = np.sort(stats.cauchy.rvs(loc=0.0, size=15, random_state=seed))
        th = sl.cauchy_mle(x)
        f = sl.CauchyLocation(15)
        grid = np.linspace(x[0], x[-1], 200_001)
        ll = np.array([-np.sum(np.log1p((x - t) ** 2)) for t in grid])
        best = grid[np.argmax(ll)]
        assert f.loglik(th, x) >= f.loglik(best, x) - 1e-9

    def test_rejects_empty_and_nonfinite(self):
        with pytest.raises(sl.DomainError):
            sl.cauchy_mle([])
        with pytest.raises(sl.DomainError):
            sl.cauchy_mle([0.0, np.inf])


class TestFamilyMle:
    def test_bernoulli_p(self):
        assert sl.family_mle(sl.Bernoulli(10), 3) == pytest.approx(0.3)

    def test_bernoulli_log_odds_boundary(self):
        f = sl.Bernoulli(10, chart="log_odds")
        assert sl.family_mle(f, 0) == -math.inf
        assert sl.family_mle(f, 10) == math.inf
        assert sl.family_mle(f, 5) == pytest.approx(0.0)

    def test_normal(self):
        assert sl.family_mle(sl.NormalLocation(2.0, 5), 1.4) == 1.4


class TestObservedInfo:
    def test_normal_is_expected(self):
        f = sl.NormalLocation(2.0, 8)
        assert sl.observed_info(f, 0.3, 0.3) == pytest.approx(2.0)

    def test_cauchy_hand_value(self):
        # single observation at the MLE: -l'' = 2(1 - 0)/(1)^2 = 2
        f = sl.CauchyLocation(1)
        assert sl.observed_info(f, 0.0, np.array([0.0])) == pytest.approx(2.0)

    def test_matches_finite_difference(self):
        x = np.sort(stats.cauchy.rvs(size=15, random_state=3))
        f = sl.CauchyLocation(15)
        th = sl.cauchy_mle(x)
        h = 1e-5
        fd = -(f.score(th + h, x) - f.score(th - h, x)) / (2 * h)
        assert sl.observed_info(f, th, x) == pytest.approx(fd, rel=1e-5)

    def test_negative_curvature_raises(self):
        # far from the data the Cauchy loglik is locally convex
        f = sl.CauchyLocation(2)
        with pytest.raises(sl.CurvatureError):
            sl.observed_info(f, 10.0, np.array([-0.5, 0.5]))


class TestScoreInterval:
    def test_normal_closed_form(self):
        # sbar = sqrt(n)(xbar - theta)/sigma, so the interval is
        # xbar +/- k sigma/sqrt(n)
        f = sl.NormalLocation(2.0, 9)
        iv = sl.score_interval(f, 1.0, Z95)
        half = Z95 * 2.0 / 3.0
        assert iv.lo == pytest.approx(1.0 - half, abs=1e-8)
        assert iv.hi == pytest.approx(1.0 + half, abs=1e-8)

    def test_bernoulli_contains_mle(self):
        f = sl.Bernoulli(10)
        iv = sl.score_interval(f, 3, Z95)
        assert iv.contains(0.3)
        assert 0.0 < iv.lo < iv.hi < 1.0

    def test_bernoulli_boundary_counts(self):
        # at y = 0 the standardized score is nonpositive everywhere, so
        # the two-sided set runs into the chart boundary
        with pytest.raises(sl.NonexistenceError):
            sl.score_interval(sl.Bernoulli(10), 0, Z95)

    def test_cauchy_nonexistence(self):
        # the standardized Cauchy score tends to 0 in both tails; for a
        # dispersed sample it never reaches +/-k
        x = np.array(sorted([-40.0, -20.0, -5.0, 0.0, 5.0, 20.0, 40.0]))
        with pytest.raises(sl.NonexistenceError):
            sl.score_interval(sl.CauchyLocation(7), x, 3.5)

    def test_cauchy_fails_even_for_tight_sample(self):
        # the decay to zero in the tails is structural, not an artifact
        # of a dispersed sample: the sub-level set always includes the
        # tails, so no bounded interval exists at any sample
        x = np.linspace(-0.5, 0.5, 15)
        with pytest.raises(sl.NonexistenceError):
            sl.score_interval(sl.CauchyLocation(15), x, 2.0)

    def test_width_increases_with_k(self):
        f = sl.Bernoulli(10)
        widths = [sl.score_interval(f, 4, k).width for k in (0.5, 1.0, 1.5, 2.0)]
        assert all(a < b for a, b in zip(widths, widths[1:]))

    def test_equivariant_under_reparam(self):
        # the standardized score is chart-invariant, so endpoints map
        # through the chart transformation
        fp = sl.Bernoulli(10, chart="p")
        fo = sl.Bernoulli(10, chart="log_odds")
        ivp = sl.score_interval(fp, 3, Z95)
        ivo = sl.score_interval(fo, 3, Z95)
        assert ivo.lo == pytest.approx(sl.reparam(fp, "p", "log_odds", ivp.lo), abs=1e-6)
        assert ivo.hi == pytest.approx(sl.reparam(fp, "p", "log_odds", ivp.hi), abs=1e-6)

    def test_bad_level(self):
        with pytest.raises(sl.DomainError):
            sl.score_interval(sl.Bernoulli(10), 4, -1.0)


class TestLrt:
    def test_zero_at_mle(self):
        x = np.sort(stats.cauchy.rvs(size=15, random_state=2))
        L = sl.lrt_estimate(sl.CauchyLocation(15), x)
        assert L(L.mle) == pytest.approx(0.0, abs=1e-10)
        assert L(L.mle + 1.0) < 0.0

    def test_bernoulli_boundary_sup(self):
        L = sl.lrt_estimate(sl.Bernoulli(10), 0)
        # S(theta) = 2 * 10 * log(1 - theta) for y = 0
        assert L(0.1) == pytest.approx(20.0 * math.log(0.9), abs=1e-10)

    def test_normal_equals_score_interval(self):
        # quadratic loglik: LRT set and score inversion coincide
        f = sl.NormalLocation(1.5, 6)
        L = sl.lrt_estimate(f, 0.7)
        iv_l = sl.lrt_interval(L, Z95)
        iv_s = sl.score_interval(f, 0.7, Z95)
        assert iv_l.lo == pytest.approx(iv_s.lo, abs=1e-8)
        assert iv_l.hi == pytest.approx(iv_s.hi, abs=1e-8)

    def test_contains_mle_and_widens_with_z(self):
        x = np.sort(stats.cauchy.rvs(size=15, random_state=5))
        L = sl.lrt_estimate(sl.CauchyLocation(15), x)
        w = [sl.lrt_interval(L, z).width for z in (1.0, 1.5, 2.0, 2.5)]
        assert all(a < b for a, b in zip(w, w[1:]))
        assert sl.lrt_interval(L, Z95).contains(L.mle)

    def test_adjustment_scales_level(self):
        x = np.sort(stats.cauchy.rvs(size=15, random_state=5))
        L = sl.lrt_estimate(sl.CauchyLocation(15), x)
        a = sl.lrt_interval(L, Z95, adjustment=1.1)
        b = sl.lrt_interval(L, 1.1 * Z95)
        assert a.lo == pytest.approx(b.lo, abs=1e-9)
        assert a.hi == pytest.approx(b.hi, abs=1e-9)
        assert a.width > sl.lrt_interval(L, Z95).width

    def test_disconnected_flag(self):
        # two distant clusters: the level set splits at small z
        x = np.array([-6.0, -5.9, -5.8, 5.8, 5.9, 6.0])
        L = sl.lrt_estimate(sl.CauchyLocation(6), x)
        iv = sl.lrt_interval(L, 1.2)
        assert iv.disconnected
        assert iv.lo < -5.0 and iv.hi > 5.0

    def test_connected_flag_for_tight_sample(self):
        x = np.sort(stats.cauchy.rvs(size=15, random_state=4))
        L = sl.lrt_estimate(sl.CauchyLocation(15), x)
        assert not sl.lrt_interval(L, Z95).disconnected


class TestWald:
    def test_hand_values(self):
        iv = sl.wald_interval(2.0, 4.0, 1.0)
        assert (iv.lo, iv.hi) == (1.5, 2.5)

    def test_adjustment(self):
        iv = sl.wald_interval(0.0, 1.0, 2.0, adjustment=1.05518)
        assert iv.hi == pytest.approx(2.11036)

    def test_normal_wald_equals_score(self):
        f = sl.NormalLocation(2.0, 9)
        iv_w = sl.wald_interval(1.0, f.fisher_info(1.0), Z95)
        iv_s = sl.score_interval(f, 1.0, Z95)
        assert iv_w.lo == pytest.approx(iv_s.lo, abs=1e-8)
        assert iv_w.hi == pytest.approx(iv_s.hi, abs=1e-8)

    def test_bad_info(self):
        with pytest.raises(sl.DomainError):
            sl.wald_interval(0.0, 0.0, 1.0)


class TestExactBernoulli:
    @pytest.mark.parametrize("y", range(11))
    def test_clopper_pearson_beta_oracle(self, y):
        n, alpha = 10, 0.05
        iv = sl.exact_bernoulli_interval(n, y, alpha)
        lo = 0.0 if y == 0 else stats.beta.ppf(alpha / 2, y, n - y + 1)
        hi = 1.0 if y == n else stats.beta.ppf(1 - alpha / 2, y + 1, n - y)
        assert iv.lo == pytest.approx(lo, abs=1e-8)
        assert iv.hi == pytest.approx(hi, abs=1e-8)

    def test_symmetry(self):
        a = sl.exact_bernoulli_interval(10, 3, 0.05)
        b = sl.exact_bernoulli_interval(10, 7, 0.05)
        assert a.lo == pytest.approx(1.0 - b.hi, abs=1e-9)
        assert a.hi == pytest.approx(1.0 - b.lo, abs=1e-9)

    def test_narrows_with_alpha(self):
        w1 = sl.exact_bernoulli_interval(10, 4, 0.01).width
        w5 = sl.exact_bernoulli_interval(10, 4, 0.05).width
        assert w5 < w1

    def test_domain_errors(self):
        with pytest.raises(sl.DomainError):
            sl.exact_bernoulli_interval(10, 11, 0.05)
        with pytest.raises(sl.DomainError):
            sl.exact_bernoulli_interval(10, 4, 0.0)


class TestIntervalType:
    def test_degenerate_rejected(self):
        with pytest.raises(sl.DomainError):
            sl.Interval(lo=1.0, hi=1.0, method="lrt", level_k=1.0)

    def test_contains_is_open(self):
        iv = sl.Interval(lo=0.0, hi=1.0, method="lrt", level_k=1.0)
        assert iv.contains(0.5)
        assert not iv.contains(0.0)
        assert iv.width == 1.0
