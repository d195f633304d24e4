#pragma once

namespace fbq {

// Complementary error function, relative error <= 1e-12 wherever the value
// is representable in double.
double erfc(double x);

// Scaled complement e^{x^2} erfc(x); stays finite for large positive x.
double erfcx(double x);

// Gamma function for x > 0; throws std::domain_error otherwise.
double gamma_fn(double x);

// Regularized lower/upper incomplete gamma P(a,x) and Q(a,x) = 1 - P(a,x),
// a > 0, x >= 0.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Standard normal CDF and its inverse (quantile), accurate to ~1e-15.
double normal_cdf(double z);
double normal_quantile(double u);

}  // namespace fbq
