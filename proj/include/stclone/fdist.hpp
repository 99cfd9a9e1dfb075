#pragma once

namespace stclone {

/// Regularized incomplete beta I_x(a, b) for x in [0, 1], a, b > 0.
double incomplete_beta(double x, double a, double b);

/// x in [0, 1] with I_x(a, b) = p.
double inverse_incomplete_beta(double p, double a, double b);

/// Cumulative and upper-tail probability of the F distribution.
double f_cdf(double x, double df1, double df2);
double f_sf(double x, double df1, double df2);

/// Inverse of f_cdf for p in (0, 1); relative error well below 1e-8.
double f_quantile(double p, double df1, double df2);

}  // namespace stclone
