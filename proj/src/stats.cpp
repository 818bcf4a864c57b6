#include "confdet/stats.hpp"

#include <cmath>
#include <limits>

#include "confdet/errors.hpp"

namespace confdet {

namespace {

// Lower incomplete gamma by power series, returns P(a,x).
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ++ap;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * std::numeric_limits<double>::epsilon()) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper incomplete gamma by modified Lentz continued fraction, returns Q(a,x).
double gamma_q_cf(double a, double x) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double fpmin = std::numeric_limits<double>::min() / eps;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= eps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0 || std::isnan(a) || std::isnan(x))
        throw NumericalError("gamma_q: domain error (a > 0 and x >= 0 required)");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0 || std::isnan(a) || std::isnan(x))
        throw NumericalError("gamma_p: domain error (a > 0 and x >= 0 required)");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double chi2_survival(double x, int df) {
    if (df < 1) throw NumericalError("chi2_survival: df must be >= 1");
    if (x < 0.0 || std::isnan(x)) throw NumericalError("chi2_survival: x must be >= 0");
    return gamma_q(0.5 * static_cast<double>(df), 0.5 * x);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / 1.4142135623730950488); }

double gamma_survival(double x, double shape, double scale) {
    if (shape <= 0.0 || scale <= 0.0)
        throw NumericalError("gamma_survival: shape and scale must be positive");
    if (x <= 0.0) return 1.0;
    return gamma_q(shape, x / scale);
}

}  // namespace confdet
