#include "mch/eigenspectrum.hpp"

#include <cmath>
#include <sstream>

#include "mch/special.hpp"

namespace mch {

double EigenSpectrum::weight_sum(std::size_t n) const {
    if (n == 0 || n > weights.size()) n = weights.size();
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += weights[i];
    return s;
}

double EigenSpectrum::weight_sum_limit() const {
    std::vector<double> s(weights.size());
    double acc = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        s[i] = acc;
    }
    const int passes = static_cast<int>(std::min<std::size_t>(12, s.size() > 1 ? s.size() - 1 : 0));
    for (int p = 0; p < passes; ++p) {
        for (std::size_t i = 0; i + 1 < s.size(); ++i) s[i] = 0.5 * (s[i] + s[i + 1]);
        s.pop_back();
    }
    return s.back();
}

double EigenSpectrum::identity_residual() const {
    return std::fabs(weight_sum_limit() / weight_sum_target() - 1.0);
}

namespace {

double boundary_g(double lam, double D_v, double k_f, double r_T) {
    const double z = lam * r_T;
    return D_v * lam * sphere_j0_prime(z) + k_f * sphere_j0(z);
}

} // namespace

EigenSpectrum solve_spectrum(double D_v, double k_f, double r_T, int n_eig) {
    if (n_eig < 1 || D_v <= 0 || k_f <= 0 || r_T <= 0)
        throw std::invalid_argument("solve_spectrum: positive parameters and n_eig >= 1 required");

    EigenSpectrum spec;
    spec.D_v = D_v;
    spec.k_f = k_f;
    spec.r_T = r_T;
    spec.lambdas.reserve(n_eig);

    const double step = M_PI / (20.0 * r_T);
    double lo = 1e-8;  // skip the trivial root at lambda = 0
    double glo = boundary_g(lo, D_v, k_f, r_T);
    // generous scan ceiling; roots are ~pi/r_T apart
    const double lam_max = (n_eig + 4) * M_PI / r_T + 1.0;
    while (static_cast<int>(spec.lambdas.size()) < n_eig) {
        double hi = lo + step;
        if (hi > lam_max) {
            std::ostringstream os;
            os << "solve_spectrum: no sign change in scan interval [" << lo << ", " << lam_max
               << "] after " << spec.lambdas.size() << " roots";
            throw BracketingFailure(os.str());
        }
        double ghi = boundary_g(hi, D_v, k_f, r_T);
        if (glo == 0.0) {
            spec.lambdas.push_back(lo);
        } else if (glo * ghi < 0.0) {
            double a = lo, b = hi, ga = glo;
            for (int it = 0; it < 200 && (b - a) > 1e-16 * b; ++it) {
                const double m = 0.5 * (a + b);
                const double gm = boundary_g(m, D_v, k_f, r_T);
                if (ga * gm <= 0.0) {
                    b = m;
                } else {
                    a = m;
                    ga = gm;
                }
            }
            spec.lambdas.push_back(0.5 * (a + b));
        }
        lo = hi;
        glo = ghi;
    }

    spec.weights.reserve(n_eig);
    spec.residuals.reserve(n_eig);
    for (double lam : spec.lambdas) {
        const double z = lam * r_T;
        spec.weights.push_back(lam * sphere_j0(z) / (2.0 * z - std::sin(2.0 * z)));
        spec.residuals.push_back(boundary_g(lam, D_v, k_f, r_T));
    }
    return spec;
}

EigenSpectrum solve_spectrum_auto(double D_v, double k_f, double r_T, double rel_tol,
                                  int n_start, int n_max) {
    int n = n_start;
    for (;;) {
        EigenSpectrum spec = solve_spectrum(D_v, k_f, r_T, n);
        if (spec.identity_residual() < rel_tol || n >= n_max) return spec;
        n *= 2;
    }
}

} // namespace mch
