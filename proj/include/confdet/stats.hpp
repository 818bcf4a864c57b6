#pragma once

namespace confdet {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a,x)/Gamma(a).
/// Series expansion below the a+1 crossover, Lentz continued fraction above;
/// relative accuracy is near machine precision over the ranges used here.
double gamma_q(double a, double x);

/// Regularized lower incomplete gamma P(a, x) = 1 - Q(a, x).
double gamma_p(double a, double x);

/// P(chi2_df > x). df >= 1 required; x < 0 is a domain error.
double chi2_survival(double x, int df);

/// Upper tail of the standard normal.
double normal_sf(double z);

/// Upper tail of Gamma(shape k, scale theta).
double gamma_survival(double x, double shape, double scale);

}  // namespace confdet
