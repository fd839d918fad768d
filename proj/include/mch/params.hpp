#ifndef MCH_PARAMS_HPP
#define MCH_PARAMS_HPP

#include <stdexcept>

// Physical parameters of the transmitter/receiver pair. Units are fixed to
// micrometers and seconds throughout; there is no runtime unit system.

namespace mch {

struct ChannelParams {
    double r_T = 5.0;      // TX radius [um]
    double r_R = 10.0;     // RX radius [um]
    double r_0 = 20.0;     // TX-center to RX-center distance [um]
    double D_v = 9.0;      // vesicle diffusion coefficient [um^2/s]
    double D_sigma = 79.4; // molecule diffusion coefficient [um^2/s]
    double k_f = 30.0;     // membrane fusion rate [um/s]
    double k_d = 0.8;      // molecule degradation rate [1/s]
    int    N_v = 200;      // vesicles generated per bit-1
    int    eta = 20;       // molecules per vesicle
    double mu = 200.0;     // vesicle generation rate [1/s]

    // Generation time of all N_v vesicles; derived, never stored.
    double tau() const { return static_cast<double>(N_v) / mu; }

    void validate() const {
        if (r_T <= 0 || r_R <= 0 || r_0 <= 0 || D_v <= 0 || D_sigma <= 0 ||
            k_f <= 0 || k_d <= 0 || N_v <= 0 || eta <= 0 || mu <= 0)
            throw std::invalid_argument("ChannelParams: all physical parameters must be positive");
        if (r_0 <= r_T)
            throw std::invalid_argument("ChannelParams: r_0 must exceed r_T (TX and RX disjoint)");
    }
};

struct GridSpec {
    double dt = 1e-3;      // [s]
    double horizon = 6.0;  // [s]

    std::size_t samples() const { return static_cast<std::size_t>(horizon / dt + 0.5) + 1; }

    void validate() const {
        if (dt <= 0) throw std::invalid_argument("GridSpec: dt must be positive");
        if (horizon < 10.0 * dt) throw std::invalid_argument("GridSpec: horizon must be at least 10*dt");
    }
};

} // namespace mch

#endif
