#include "mch/link.hpp"

#include <algorithm>
#include <cmath>

#include "mch/special.hpp"

namespace mch {

double detection_time(const TimeSeries& p_hat, double T_b) {
    const double t_m = p_hat.time_at(p_hat.argmax());
    return t_m < T_b ? t_m : T_b;
}

double poisson_mean(const std::vector<int>& bits, const TimeSeries& p_hat, double T_b,
                    double t_d1, int N_v, int eta) {
    const int q = static_cast<int>(bits.size());
    double s = 0;
    for (int g = 1; g <= q; ++g)
        if (bits[g - 1]) s += p_hat.sample_at((q - g) * T_b + t_d1);
    return static_cast<double>(N_v) * static_cast<double>(eta) * s;
}

double ber_given_history(const std::vector<int>& prefix, long long omega,
                         const TimeSeries& p_hat, const LinkConfig& link, double t_d1,
                         int N_v, int eta) {
    std::vector<int> bits = prefix;
    bits.push_back(1);
    const double psi1 = poisson_mean(bits, p_hat, link.T_b, t_d1, N_v, eta);
    bits.back() = 0;
    const double psi0 = poisson_mean(bits, p_hat, link.T_b, t_d1, N_v, eta);
    return link.P1 * poisson_cdf_below(omega, psi1) +
           link.P0 * poisson_tail_at_least(omega, psi0);
}

namespace {

// Per-bit Poisson means at the detection lags: pv[m] = P at (m T_b + t_d1).
std::vector<double> lag_means(const LinkConfig& link, const TimeSeries& p_hat, double t_d1,
                              int N_v, int eta) {
    std::vector<double> pv(link.Q);
    for (int m = 0; m < link.Q; ++m)
        pv[m] = static_cast<double>(N_v) * eta * p_hat.sample_at(m * link.T_b + t_d1);
    return pv;
}

} // namespace

double average_ber(const LinkConfig& link, const TimeSeries& p_hat, long long omega,
                   double t_d1, int N_v, int eta, std::vector<double>* per_q) {
    link.validate();
    const std::vector<double> pv = lag_means(link, p_hat, t_d1, N_v, eta);
    if (per_q) per_q->assign(link.Q, 0.0);
    double total = 0;
    for (int q = 1; q <= link.Q; ++q) {
        const int npref = q - 1;
        double acc = 0;
        for (std::uint64_t mask = 0; mask < (1ull << npref); ++mask) {
            double isi = 0, prob = 1;
            for (int b = 0; b < npref; ++b) {
                // prefix bit b_g with g = b+1 contributes at lag q-g = npref-b
                if (mask >> b & 1) {
                    isi += pv[npref - b];
                    prob *= link.P1;
                } else {
                    prob *= link.P0;
                }
            }
            const double phi = link.P1 * poisson_cdf_below(omega, isi + pv[0]) +
                               link.P0 * poisson_tail_at_least(omega, isi);
            acc += prob * phi;
        }
        if (per_q) (*per_q)[q - 1] = acc;
        total += acc;
    }
    return total / link.Q;
}

std::pair<long long, double> optimize_threshold(const LinkConfig& link, const TimeSeries& p_hat,
                                                double t_d1, int N_v, int eta,
                                                std::optional<long long> omega_max) {
    const std::vector<double> pv = lag_means(link, p_hat, t_d1, N_v, eta);
    double psi_all = 0;
    for (double v : pv) psi_all += v;
    const long long om_hi =
        omega_max.value_or(static_cast<long long>(std::ceil(3.0 * psi_all)) + 1);
    long long best_om = 0;
    double best = 1.0;

    // The per-q prefix psi values and weights do not depend on omega;
    // enumerate them once.
    std::vector<std::vector<double>> isi_by_q(link.Q), wt_by_q(link.Q);
    for (int q = 1; q <= link.Q; ++q) {
        const int npref = q - 1;
        auto& isi = isi_by_q[q - 1];
        auto& wt = wt_by_q[q - 1];
        isi.resize(1ull << npref);
        wt.resize(1ull << npref);
        for (std::uint64_t mask = 0; mask < isi.size(); ++mask) {
            double s = 0, prob = 1;
            for (int b = 0; b < npref; ++b) {
                if (mask >> b & 1) {
                    s += pv[npref - b];
                    prob *= link.P1;
                } else {
                    prob *= link.P0;
                }
            }
            isi[mask] = s;
            wt[mask] = prob;
        }
    }
    for (long long om = 0; om <= om_hi; ++om) {
        double total = 0;
        for (int q = 1; q <= link.Q; ++q) {
            const auto& isi = isi_by_q[q - 1];
            const auto& wt = wt_by_q[q - 1];
            double acc = 0;
            for (std::uint64_t mask = 0; mask < isi.size(); ++mask)
                acc += wt[mask] * (link.P1 * poisson_cdf_below(om, isi[mask] + pv[0]) +
                                   link.P0 * poisson_tail_at_least(om, isi[mask]));
            total += acc;
        }
        total /= link.Q;
        if (total < best) {
            best = total;
            best_om = om;
        }
    }
    return {best_om, best};
}

std::vector<BerReport> sweep_nfm(const LinkConfig& link, const ChannelParams& params,
                                 const EigenSpectrum& spectrum, const ReceptorLayout& layout,
                                 const std::vector<double>& t_hat_grid, const GridSpec& grid) {
    link.validate();
    const auto cap = capacitance(layout, params.r_T);
    const auto consts = absorption_constants(params, cap.G_T);
    std::vector<BerReport> out(t_hat_grid.size());
    for (std::size_t i = 0; i < t_hat_grid.size(); ++i) {
        NfmConfig nfm{t_hat_grid[i], grid.dt};
        TimeSeries ph = nfm_observed_prob(params, spectrum, layout, nfm, grid);
        BerReport rep;
        rep.t_hat = t_hat_grid[i];
        rep.t_d1 = detection_time(ph, link.T_b);
        auto [om, ber] = optimize_threshold(link, ph, rep.t_d1, params.N_v, params.eta);
        rep.omega = om;
        rep.avg_ber = average_ber(link, ph, om, rep.t_d1, params.N_v, params.eta, &rep.per_q_ber);
        rep.recyclable_fraction = recyclable_fraction(params, spectrum, consts, t_hat_grid[i]);
        out[i] = std::move(rep);
    }
    return out;
}

const BerReport& best_report(const std::vector<BerReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("best_report: empty sweep");
    std::size_t best = 0;
    for (std::size_t i = 1; i < reports.size(); ++i)
        if (reports[i].avg_ber < reports[best].avg_ber) best = i;
    return reports[best];
}

} // namespace mch
