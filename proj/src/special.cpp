#include "mch/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mch {

double erfcx(double x) {
    if (x < 0.0) {
        // erfcx(-x) = 2 exp(x^2) - erfcx(x); only small negative arguments occur here
        return 2.0 * std::exp(x * x) - erfcx(-x);
    }
    if (x <= 5.0) {
        return std::exp(x * x) * std::erfc(x);
    }
    // asymptotic series 1/(x sqrt(pi)) * sum (-1)^k (2k-1)!! / (2x^2)^k
    const double inv2x2 = 1.0 / (2.0 * x * x);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 12; ++k) {
        term *= -(2.0 * k - 1.0) * inv2x2;
        sum += term;
        if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
    }
    return sum / (x * 1.7724538509055160273);
}

double sphere_j0(double z) {
    const double az = std::fabs(z);
    if (az < 1e-4) {
        const double z2 = z * z;
        return 1.0 - z2 / 6.0 * (1.0 - z2 / 20.0);
    }
    return std::sin(z) / z;
}

double sphere_j0_prime(double z) {
    const double az = std::fabs(z);
    if (az < 1e-4) {
        const double z2 = z * z;
        return -z / 3.0 * (1.0 - z2 / 10.0);
    }
    return std::cos(z) / z - std::sin(z) / (z * z);
}

namespace {

// Lower incomplete gamma by power series, x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper incomplete gamma by modified Lentz continued fraction, x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::domain_error("gamma_p: a > 0 and x >= 0 required");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::domain_error("gamma_q: a > 0 and x >= 0 required");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

namespace {

double std_normal_cdf(double z) {
    return 0.5 * std::erfc(-z * 0.70710678118654752440);
}

} // namespace

double poisson_cdf_below(long long omega, double mean) {
    if (omega <= 0) return 0.0;
    if (mean <= 0.0) return 1.0;
    if (mean > 700.0) {
        return std_normal_cdf((static_cast<double>(omega) - 0.5 - mean) / std::sqrt(mean));
    }
    // Pr(N <= omega-1) = Q(omega, mean)
    return gamma_q(static_cast<double>(omega), mean);
}

double poisson_tail_at_least(long long omega, double mean) {
    if (omega <= 0) return 1.0;
    if (mean <= 0.0) return 0.0;
    if (mean > 700.0) {
        return 1.0 - std_normal_cdf((static_cast<double>(omega) - 0.5 - mean) / std::sqrt(mean));
    }
    return gamma_p(static_cast<double>(omega), mean);
}

} // namespace mch
