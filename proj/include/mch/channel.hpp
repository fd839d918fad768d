#ifndef MCH_CHANNEL_HPP
#define MCH_CHANNEL_HPP

#include "mch/capacitance.hpp"
#include "mch/eigenspectrum.hpp"
#include "mch/params.hpp"
#include "mch/receptors.hpp"
#include "mch/timeseries.hpp"

// Closed-form time functions of the harvesting channel and their grid
// evaluations. All probabilities/fractions are per released molecule.

namespace mch {

struct DegenerateKd : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Constants of the uniform-membrane-release absorption fraction H(t):
//   w = D_sigma G_T / (r_T (r_T - G_T)),  gamma = 1/(r_T - G_T),
//   zeta = gamma^2 D_sigma - k_d.
// Requires k_d > 0 (the expressions carry 1/sqrt(k_d)).
struct AbsorptionConstants {
    double w = 0, gamma = 0, zeta = 0;
    double D_sigma = 0, k_d = 0;
};
AbsorptionConstants absorption_constants(const ChannelParams& params, double G_T);

// Molecule release rate f_c(t) under continuous vesicle generation.
// Two branches around tau = N_v/mu; the t <= tau branch evaluates the
// constant term of the series through the exact weight-sum identity, which
// removes the 1/N truncation error of the raw partial sum.
double release_rate(const ChannelParams& params, const EigenSpectrum& spec, double t);
// df_c/dt
double release_rate_derivative(const ChannelParams& params, const EigenSpectrum& spec, double t);

// H(t): fraction absorbed by time t after a simultaneous uniform release
// from the TX membrane at t = 0.
double uniform_absorption(const AbsorptionConstants& c, double t);
// H_{e,inf}: asymptotic absorbed fraction under continuous generation.
double absorbed_fraction_limit(const AbsorptionConstants& c);

// P_alpha(t): probability that a molecule released at distance r_alpha from
// the RX center at t = 0 is inside the (transparent) RX at time t.
double point_source_prob(double r_alpha, const ChannelParams& params, double t);

// P_u(t): the same probability for a uniform simultaneous release from the
// TX membrane (surface average of P_alpha). Requires r_0 - r_T > r_R.
double uniform_release_prob(const ChannelParams& params, double t);

TimeSeries release_rate_series(const ChannelParams&, const EigenSpectrum&, const GridSpec&);
TimeSeries release_rate_derivative_series(const ChannelParams&, const EigenSpectrum&, const GridSpec&);
TimeSeries uniform_absorption_series(const AbsorptionConstants&, const GridSpec&);
TimeSeries point_source_prob_series(double r_alpha, const ChannelParams&, const GridSpec&);
TimeSeries uniform_release_prob_series(const ChannelParams&, const GridSpec&);

// sum_i A_i P_alpha(t)|_{r_alpha = d_i} over the layout's receptors.
TimeSeries receptor_mix_series(const ChannelParams&, const ReceptorLayout&, const GridSpec&);

// H_e = f_c * H          (fraction absorbed by time t)
TimeSeries absorbed_fraction(const ChannelParams&, const EigenSpectrum&,
                             const ReceptorLayout&, const GridSpec&);
// h_e = f_cd * H         (absorption rate)
TimeSeries absorption_rate(const ChannelParams&, const EigenSpectrum&,
                           const ReceptorLayout&, const GridSpec&);
// P_T = f_c * P_u        (received signal, receptor-free TX)
TimeSeries no_receptor_prob(const ChannelParams&, const EigenSpectrum&, const GridSpec&);
// P_r = (h_e/A) * sum_i A_i P_alpha|d_i   (signal lost to harvesting)
TimeSeries receptor_loss_prob(const ChannelParams&, const EigenSpectrum&,
                              const ReceptorLayout&, const GridSpec&);

enum class ObservedMode { general, even_simplified, single_simplified };

struct ModeMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// P(t): received signal of the receptor-covered TX.
//   general:           P = P_T - P_r
//   even-simplified:   P = (f_c - h_e) * P_u      (identical, evenly placed)
//   single-simplified: P = f_c*P_u - h_e * P_alpha|d_s
// Negative truncation dips are clamped to zero (logged when non-negligible).
TimeSeries observed_prob(const ChannelParams&, const EigenSpectrum&, const ReceptorLayout&,
                         const GridSpec&, ObservedMode mode = ObservedMode::general);

// clamp tiny negative truncation dips; returns the largest clamped magnitude
double clamp_nonnegative(TimeSeries& s, const char* label);

} // namespace mch

#endif
