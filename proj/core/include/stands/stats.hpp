#pragma once

namespace stands {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_lower_gamma(double a, double x);

/// Chi-squared CDF with dof degrees of freedom, evaluated at x >= 0.
double chi_squared_cdf(int dof, double x);

/// Inverse chi-squared CDF, found by bisection on the regularized lower
/// incomplete gamma function to absolute tolerance 1e-9 in the quantile.
/// Throws NonConvergence if no bracket can be established and
/// std::invalid_argument for alpha outside (0, 1) or dof < 1.
double chi_squared_quantile(int dof, double alpha);

}  // namespace stands
