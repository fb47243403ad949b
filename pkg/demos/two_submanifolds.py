"""Why variance alone cannot rank estimators.

On a one-parameter slice of the bivariate normal with mean (theta, 0),
both coordinate means have the same variance 1/n and both attain the
classical variance lower bound for their own expectation.  Yet the
first carries every bit of information about theta and the second
carries none.  Squared slope separates them instantly: n versus 0.
"""

import slope_lab as sl


def main() -> None:
    n = 6
    f = sl.BivariateNormalSlice(n)
    g1 = sl.lift_point_estimator(
        f, lambda y: y[0], mean_fn=lambda th: th, mean_deriv=lambda th: 1.0
    )
    g2 = sl.lift_point_estimator(
        f, lambda y: y[1], mean_fn=lambda th: 0.0, mean_deriv=lambda th: 0.0
    )

    th = 0.7
    print(f"bivariate slice, n={n}, evaluated at theta={th}")
    print(f"  var(z1) = {g1.var(th):.6f}   var(z2) = {g2.var(th):.6f}")
    print(f"  slope(z1) = {sl.squared_slope(g1, th):.6f}  "
          f"(Fisher information = {f.fisher_info(th):.1f})")
    print(f"  slope(z2) = {sl.squared_slope(g2, th):.6f}")
    print()
    print("Equal variances, opposite usefulness: z1's mean moves one-for-one")
    print("with theta while z2's mean never moves, and the slope -- the")
    print("squared mean sensitivity per unit variance -- records exactly that.")


if __name__ == "__main__":
    main()
