#ifndef MCH_NFM_HPP
#define MCH_NFM_HPP

#include "mch/channel.hpp"

// Negative feedback: the TX stops releasing at t_hat. Molecules not yet
// released stay recyclable, as do molecules harvested back by the receptors.

namespace mch {

struct NfmConfig {
    double t_hat = 1.6;    // stop-release time [s]
    double epsilon = 1e-3; // central-difference step for the absorption rate [s]

    void validate(const GridSpec& grid) const {
        if (t_hat <= 0) throw std::invalid_argument("NfmConfig: t_hat must be positive");
        if (epsilon <= 0 || epsilon > 0.1 * grid.horizon)
            throw std::invalid_argument("NfmConfig: epsilon must be positive and small");
    }
};

// Truncated release rate: f_c(t) for t <= t_hat, zero afterwards.
double nfm_release_rate(const ChannelParams&, const EigenSpectrum&, const NfmConfig&, double t);
TimeSeries nfm_release_rate_series(const ChannelParams&, const EigenSpectrum&, const NfmConfig&,
                                   const GridSpec&);

// chi(t_hat): fraction of a transmission's molecules that stay recyclable
// (never released due to the stop, or harvested back as t -> infinity).
// Closed form from the beta_1(inf) + beta_2 expressions; continuous at
// t_hat = tau.
double recyclable_fraction(const ChannelParams&, const EigenSpectrum&,
                           const AbsorptionConstants&, double t_hat);
// The same quantity as a molecule count, N_v * eta * fraction.
double recyclable_count(const ChannelParams&, const EigenSpectrum&,
                        const AbsorptionConstants&, double t_hat);

// beta_1(t) = f_c-truncated * H  (fraction harvested by time t under NFM)
TimeSeries nfm_absorbed_fraction(const ChannelParams&, const EigenSpectrum&,
                                 const AbsorptionConstants&, const NfmConfig&, const GridSpec&);

// Received signal with NFM: f_hat_c * P_u - (h_hat_e/A) * sum_i A_i P_alpha|d_i,
// where h_hat_e is the central difference of beta_1.
TimeSeries nfm_observed_prob(const ChannelParams&, const EigenSpectrum&, const ReceptorLayout&,
                             const NfmConfig&, const GridSpec&);

} // namespace mch

#endif
