"""How much information does the sample median keep?

For odd Cauchy samples we compare three estimators that all target the
location: the median as a plain point estimate, the score of the
median's own sampling law, and the full-sample score.  Squared slope
converts each into an information number, so the comparison reads as
"a median of 15 observations is worth about 10.8 fresh observations,
and treating it as a point estimate costs one more".
"""

import slope_lab as sl


def main() -> None:
    print(f"{'n':>3} {'slope(med)':>11} {'slope(med score)':>17} "
          f"{'slope(full)':>12} {'eff %':>7} {'n_eff':>6}")
    for n in range(1, 32, 2):
        r = sl.cauchy_table_row(n)
        med = "diverges" if r.variance_diverges else f"{r.lam_median:11.5f}"
        print(f"{n:3d} {med:>11} {r.lam_median_score:17.5f} "
              f"{r.lam_full_score:12.1f} {r.eff_median_score:7.2f} "
              f"{r.n_median_score:6.1f}")

    r = sl.cauchy_table_row(15)
    print()
    print("Reading the n=15 row: reducing 15 observations to their median")
    print(f"leaves the slope of the best median-based estimator at "
          f"{r.lam_median_score:.4f},")
    print(f"versus {r.lam_full_score:.1f} for the full-sample score -- the "
          f"effective sample size")
    print(f"drops to {r.n_median_score:.1f}.  Using the median as a raw point "
          f"estimate costs a")
    print(f"further observation ({r.n_median:.1f}).")


if __name__ == "__main__":
    main()
