#ifndef MCH_LINK_HPP
#define MCH_LINK_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "mch/nfm.hpp"

// On-off-keyed bit pipeline: Poisson-approximated observation counts, a
// threshold detector, exact BER enumeration over bit histories, and the
// threshold / stop-time optimizers.

namespace mch {

struct LinkConfig {
    int Q = 10;        // sequence length
    double T_b = 1.8;  // bit interval [s]
    double P0 = 0.5, P1 = 0.5;

    void validate() const {
        if (Q < 1) throw std::invalid_argument("LinkConfig: Q >= 1 required");
        if (T_b <= 0) throw std::invalid_argument("LinkConfig: T_b must be positive");
        if (P0 < 0 || P1 < 0 || std::fabs(P0 + P1 - 1.0) > 1e-12)
            throw std::invalid_argument("LinkConfig: P0 + P1 must equal 1");
    }
};

struct BerReport {
    double t_hat = 0;                   // stop time (0 = no NFM)
    double t_d1 = 0;                    // first detection time
    long long omega = 0;                // decision threshold
    double avg_ber = 0;                 // Phi-bar at omega
    std::vector<double> per_q_ber;      // conditional-BER average per bit index
    double recyclable_fraction = 0;     // chi at t_hat (1-sided; H_e,inf if no NFM)
};

// First detection time: the received-signal peak, capped at T_b. Ties break
// to the earliest grid point.
double detection_time(const TimeSeries& p_hat, double T_b);

// psi of Poisson(N_q): expected observed count at the detection time of bit
// q given transmitted prefix bits b_1..b_q.
double poisson_mean(const std::vector<int>& bits, const TimeSeries& p_hat, double T_b,
                    double t_d1, int N_v, int eta);

// BER of bit q given the prefix b_1..b_{q-1} (Poisson threshold detector).
double ber_given_history(const std::vector<int>& prefix, long long omega,
                         const TimeSeries& p_hat, const LinkConfig& link, double t_d1,
                         int N_v, int eta);

// Average BER over all bits and all prefix histories (exact enumeration,
// prefixes weighted by their occurrence probability).
double average_ber(const LinkConfig& link, const TimeSeries& p_hat, long long omega,
                   double t_d1, int N_v, int eta, std::vector<double>* per_q = nullptr);

// Exhaustive integer threshold sweep; omega_max defaults to ceil(3 max psi).
std::pair<long long, double> optimize_threshold(const LinkConfig& link, const TimeSeries& p_hat,
                                                double t_d1, int N_v, int eta,
                                                std::optional<long long> omega_max = {});

// For each t_hat: rebuild the NFM signal, detect, optimize the threshold and
// report chi. Entries come back in t_hat order; the minimum-BER row is the
// operating point.
std::vector<BerReport> sweep_nfm(const LinkConfig& link, const ChannelParams& params,
                                 const EigenSpectrum& spectrum, const ReceptorLayout& layout,
                                 const std::vector<double>& t_hat_grid, const GridSpec& grid);

const BerReport& best_report(const std::vector<BerReport>& reports);

} // namespace mch

#endif
