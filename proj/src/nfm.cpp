#include "mch/nfm.hpp"

#include <cmath>

namespace mch {

double nfm_release_rate(const ChannelParams& p, const EigenSpectrum& spec, const NfmConfig& nfm,
                        double t) {
    if (t > nfm.t_hat) return 0.0;
    return release_rate(p, spec, t);
}

TimeSeries nfm_release_rate_series(const ChannelParams& p, const EigenSpectrum& spec,
                                   const NfmConfig& nfm, const GridSpec& grid) {
    return tabulate(grid, [&](double t) { return nfm_release_rate(p, spec, nfm, t); });
}

double recyclable_fraction(const ChannelParams& p, const EigenSpectrum& spec,
                           const AbsorptionConstants& c, double t_hat) {
    if (t_hat <= 0) return 1.0;
    const double tau = p.tau();
    const double C = 4.0 * p.r_T * p.r_T * p.k_f * p.mu / (static_cast<double>(p.N_v) * p.D_v);
    const double Winf = spec.weight_sum_target();  // exact sum of the weights
    const double Hinf = absorbed_fraction_limit(c);
    double acc = 0.0;
    if (t_hat <= tau) {
        // (Hinf - 1) sum_n w_n (t_hat - (1-e^{-D l^2 t})/(D l^2)) + tau sum_n w_n;
        // the pure-t_hat and pure-tau parts use the exact weight sum.
        for (std::size_t n = 0; n < spec.size(); ++n) {
            const double dl2 = spec.decay_rate(n);
            acc += spec.weights[n] * (1.0 - std::exp(-dl2 * t_hat)) / dl2;
        }
        return C * ((Hinf - 1.0) * (t_hat * Winf - acc) + tau * Winf);
    }
    for (std::size_t n = 0; n < spec.size(); ++n) {
        const double dl2 = spec.decay_rate(n);
        acc += spec.weights[n] *
               (std::exp(-dl2 * (t_hat - tau)) - std::exp(-dl2 * t_hat)) / dl2;
    }
    return C * (Hinf * tau * Winf + (1.0 - Hinf) * acc);
}

double recyclable_count(const ChannelParams& p, const EigenSpectrum& spec,
                        const AbsorptionConstants& c, double t_hat) {
    return static_cast<double>(p.N_v) * static_cast<double>(p.eta) *
           recyclable_fraction(p, spec, c, t_hat);
}

TimeSeries nfm_absorbed_fraction(const ChannelParams& p, const EigenSpectrum& spec,
                                 const AbsorptionConstants& c, const NfmConfig& nfm,
                                 const GridSpec& grid) {
    return convolve(nfm_release_rate_series(p, spec, nfm, grid),
                    uniform_absorption_series(c, grid));
}

TimeSeries nfm_observed_prob(const ChannelParams& p, const EigenSpectrum& spec,
                             const ReceptorLayout& layout, const NfmConfig& nfm,
                             const GridSpec& grid) {
    nfm.validate(grid);
    TimeSeries fch = nfm_release_rate_series(p, spec, nfm, grid);
    TimeSeries out = convolve(fch, uniform_release_prob_series(p, grid));
    if (layout.kind != LayoutKind::none) {
        const auto c = absorption_constants(p, capacitance(layout, p.r_T).G_T);
        TimeSeries beta1 = convolve(fch, uniform_absorption_series(c, grid));
        // h_hat_e(t) = (beta_1(t+eps) - beta_1(t-eps)) / (2 eps), with eps
        // snapped to the grid; one-sided near the ends where t -/+ eps would
        // leave the grid.
        const std::size_t m = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(nfm.epsilon / grid.dt)));
        const std::size_t n = beta1.size();
        TimeSeries he{beta1.dt, std::vector<double>(n)};
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t klo = k >= m ? k - m : 0;
            const std::size_t khi = k + m < n ? k + m : n - 1;
            he.values[k] = (beta1[khi] - beta1[klo]) / (grid.dt * static_cast<double>(khi - klo));
        }
        const double A = layout.coverage(p.r_T);
        for (auto& v : he.values) v /= A;
        TimeSeries lost = convolve(he, receptor_mix_series(p, layout, grid));
        for (std::size_t k = 0; k < out.size(); ++k) out.values[k] -= lost[k];
    }
    clamp_nonnegative(out, "nfm_observed_prob");
    return out;
}

} // namespace mch
