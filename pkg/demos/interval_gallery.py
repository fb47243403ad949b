"""Four interval constructions on one Cauchy sample.

The same 15 observations are pushed through the two Wald
linearizations (expected and observed information), the likelihood-
ratio level set, and score inversion.  Score inversion fails here by
design: the standardized Cauchy score decays to zero in both tails, so
the level is never reached and the solver reports nonexistence rather
than a spurious interval.  Widths are also converted to KL length,
which is the chart-free way to compare them.
"""

import numpy as np
from scipy import stats

import slope_lab as sl


def main() -> None:
    n = 15
    x = np.sort(stats.cauchy.rvs(loc=2.0, size=n, random_state=20260824))
    f = sl.CauchyLocation(n)
    z = float(stats.norm.ppf(0.975))

    theta_hat = sl.cauchy_mle(x)
    i_obs = sl.observed_info(f, theta_hat, x)
    print(f"sample range [{x[0]:.2f}, {x[-1]:.2f}],  "
          f"mle {theta_hat:.4f},  observed info {i_obs:.3f} "
          f"(expected {f.fisher_info(theta_hat):.3f})")
    print()

    rows = [
        ("wald expected", sl.wald_interval(theta_hat, f.fisher_info(theta_hat), z)),
        ("wald observed", sl.wald_interval(theta_hat, i_obs, z,
                                           method="wald_observed")),
        ("lrt", sl.lrt_interval(sl.lrt_estimate(f, x), z)),
    ]
    print(f"{'method':<14} {'interval':<22} {'width':>7} {'kl length':>10}")
    for name, iv in rows:
        print(f"{name:<14} ({iv.lo:8.4f}, {iv.hi:8.4f})  {iv.width:7.4f} "
              f"{sl.kl_length(f, iv):10.5f}")

    print()
    try:
        sl.score_interval(f, x, z)
    except sl.NonexistenceError as exc:
        print(f"score inversion: no interval exists -- {exc}")

    print()
    print("An exact construction for comparison (binomial, n=10, y=3):")
    iv = sl.exact_bernoulli_interval(10, 3, 0.05)
    print(f"exact tail inversion -> ({iv.lo:.4f}, {iv.hi:.4f})")


if __name__ == "__main__":
    main()
