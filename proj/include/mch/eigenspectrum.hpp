#ifndef MCH_EIGENSPECTRUM_HPP
#define MCH_EIGENSPECTRUM_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mch {

// Boundary-condition spectrum of the vesicle release problem. The lambda_n
// are the positive roots of
//
//     g(lambda) = D_v lambda j0'(lambda r_T) + k_f j0(lambda r_T) = 0,
//
// the radiation condition of the membrane-fusion diffusion problem. Each
// root carries the series weight
//
//     w_n = lambda_n j0(lambda_n r_T) / (2 lambda_n r_T - sin(2 lambda_n r_T)),
//
// and the weights satisfy sum_n w_n = D_v / (4 r_T^2 k_f). The raw partial
// sums converge only like 1/N (the terms alternate in sign with ~1/n decay),
// so the identity is evaluated through iterated averaging of the partial
// sums, which reaches machine accuracy within ~50 terms.
struct EigenSpectrum {
    std::vector<double> lambdas;    // [1/um], strictly increasing
    std::vector<double> weights;    // w_n [1/um]
    std::vector<double> residuals;  // g(lambda_n), should be ~0
    double D_v = 0, k_f = 0, r_T = 0;

    std::size_t size() const { return lambdas.size(); }

    // D_v lambda_n^2, the decay rate of mode n.
    double decay_rate(std::size_t n) const { return D_v * lambdas[n] * lambdas[n]; }

    // Exact value of sum_n w_n implied by release-mass conservation.
    double weight_sum_target() const { return D_v / (4.0 * r_T * r_T * k_f); }

    // Raw partial sum of the first n weights (all of them by default).
    double weight_sum(std::size_t n = 0) const;

    // Accelerated estimate of the full weight sum (iterated averaging).
    double weight_sum_limit() const;

    // |weight_sum_limit * 4 r_T^2 k_f / D_v - 1|
    double identity_residual() const;
};

struct BracketingFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// First n_eig roots by sign-change scanning (step pi/(20 r_T), starting at
// lambda = 1e-8) followed by bisection.
EigenSpectrum solve_spectrum(double D_v, double k_f, double r_T, int n_eig);

// Default-sized spectrum, extended until the weight-sum identity holds to
// rel_tol (evaluated with acceleration).
EigenSpectrum solve_spectrum_auto(double D_v, double k_f, double r_T,
                                  double rel_tol = 1e-6, int n_start = 100,
                                  int n_max = 6400);

} // namespace mch

#endif
