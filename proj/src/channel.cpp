#include "mch/channel.hpp"

#include <cmath>
#include <cstdio>

#include "mch/special.hpp"

namespace mch {

AbsorptionConstants absorption_constants(const ChannelParams& params, double G_T) {
    if (params.k_d < 1e-12)
        throw DegenerateKd("absorption_constants: k_d must be positive (expressions carry 1/sqrt(k_d))");
    if (G_T <= 0 || G_T >= params.r_T)
        throw std::invalid_argument("absorption_constants: need 0 < G_T < r_T");
    AbsorptionConstants c;
    c.D_sigma = params.D_sigma;
    c.k_d = params.k_d;
    c.w = params.D_sigma * G_T / (params.r_T * (params.r_T - G_T));
    c.gamma = 1.0 / (params.r_T - G_T);
    c.zeta = c.gamma * c.gamma * params.D_sigma - params.k_d;
    return c;
}

namespace {

// Rising branch of the release rate without its prefactor:
//   sum_n w_n (1 - exp(-D lambda_n^2 t)).
// For t up to ~1/(D lambda_N^2) the truncated sum itself is accurate (the
// omitted tail terms are all suppressed by their small exponents); past that
// point the truncation error approaches the raw weight-sum deficit, and the
// exact weight-sum identity removes it. The switch keeps both the t -> 0
// limit and the on-grid values accurate.
double rising_branch(const EigenSpectrum& spec, double t) {
    const double lam_last = spec.lambdas.back();
    const double t_switch = 1.0 / (spec.D_v * lam_last * lam_last);
    double s = 0.0;
    if (t < t_switch) {
        for (std::size_t n = 0; n < spec.size(); ++n)
            s += spec.weights[n] * (1.0 - std::exp(-spec.decay_rate(n) * t));
        return s;
    }
    for (std::size_t n = 0; n < spec.size(); ++n)
        s += spec.weights[n] * std::exp(-spec.decay_rate(n) * t);
    return spec.weight_sum_target() - s;
}

} // namespace

double release_rate(const ChannelParams& params, const EigenSpectrum& spec, double t) {
    if (t <= 0.0) return 0.0;
    const double tau = params.tau();
    const double C = 4.0 * params.r_T * params.r_T * params.k_f * params.mu /
                     (static_cast<double>(params.N_v) * params.D_v);
    if (t <= tau) return C * rising_branch(spec, t);
    // decaying branch as an exact difference of rising branches
    return C * (rising_branch(spec, t) - rising_branch(spec, t - tau));
}

double release_rate_derivative(const ChannelParams& params, const EigenSpectrum& spec, double t) {
    if (t <= 0.0) return 0.0;
    const double tau = params.tau();
    const double C = 4.0 * params.r_T * params.r_T * params.k_f * params.mu /
                     static_cast<double>(params.N_v);
    double s = 0.0;
    if (t <= tau) {
        for (std::size_t n = 0; n < spec.size(); ++n) {
            const double l2 = spec.lambdas[n] * spec.lambdas[n];
            s += spec.weights[n] * l2 * std::exp(-spec.decay_rate(n) * t);
        }
        return C * s;
    }
    for (std::size_t n = 0; n < spec.size(); ++n) {
        const double l2 = spec.lambdas[n] * spec.lambdas[n];
        s += spec.weights[n] * l2 *
             (std::exp(-spec.decay_rate(n) * t) - std::exp(-spec.decay_rate(n) * (t - tau)));
    }
    return C * s;
}

double uniform_absorption(const AbsorptionConstants& c, double t) {
    if (t <= 0.0) return 0.0;
    const double e1 = std::erf(std::sqrt(c.k_d * t));
    // exp(zeta t) erfc(gamma sqrt(D t)) = exp(-k_d t) erfcx(gamma sqrt(D t))
    const double stable = std::exp(-c.k_d * t) * erfcx(c.gamma * std::sqrt(c.D_sigma * t));
    return c.w * e1 / std::sqrt(c.k_d * c.D_sigma) -
           (c.w * c.gamma / c.zeta) *
               (stable + c.gamma * std::sqrt(c.D_sigma / c.k_d) * e1 - 1.0);
}

double absorbed_fraction_limit(const AbsorptionConstants& c) {
    return c.w / std::sqrt(c.D_sigma * c.k_d) -
           c.w * c.gamma * c.gamma / c.zeta * std::sqrt(c.D_sigma / c.k_d) +
           c.w * c.gamma / c.zeta;
}

double point_source_prob(double r_alpha, const ChannelParams& params, double t) {
    if (t <= 0.0) return 0.0;
    const double D = params.D_sigma, rR = params.r_R;
    const double s = std::sqrt(4.0 * D * t);
    const double ek = std::exp(-params.k_d * t);
    const double gaussians =
        std::exp(-(rR + r_alpha) * (rR + r_alpha) / (4.0 * D * t) - params.k_d * t) -
        std::exp(-(rR - r_alpha) * (rR - r_alpha) / (4.0 * D * t) - params.k_d * t);
    return 0.5 * (std::erf((rR - r_alpha) / s) + std::erf((rR + r_alpha) / s)) * ek +
           std::sqrt(D * t / M_PI) / r_alpha * gaussians;
}

namespace {

void check_outside_observer(const ChannelParams& params) {
    if (params.r_0 - params.r_T <= params.r_R)
        throw std::invalid_argument(
            "uniform_release_prob: requires r_0 - r_T > r_R (RX must not reach the TX membrane)");
}

} // namespace

double uniform_release_prob(const ChannelParams& params, double t) {
    check_outside_observer(params);
    if (t <= 0.0) return 0.0;
    const double D = params.D_sigma, rR = params.r_R, rT = params.r_T, r0 = params.r_0;
    const double s = std::sqrt(4.0 * D * t);
    const double ek = std::exp(-params.k_d * t);
    const auto xi1 = [&](double z) {
        return std::exp(-(rR - z) * (rR - z) / (4.0 * D * t) - params.k_d * t) * (rR + z) *
                   std::sqrt(4.0 * D * t / M_PI) +
               (rR * rR + 2.0 * D * t - z * z) * std::erf((rR - z) / s) * ek;
    };
    const auto xi2 = [&](double z) { return std::erf((rR + z) / s) * ek; };
    return (xi1(r0 - rT) + xi1(rT - r0) - xi1(r0 + rT) - xi1(-r0 - rT)) / (8.0 * r0 * rT) +
           D * t / (2.0 * rT * r0) *
               (xi2(rT + r0) + xi2(-rT - r0) - xi2(r0 - rT) - xi2(rT - r0));
}

TimeSeries release_rate_series(const ChannelParams& p, const EigenSpectrum& spec,
                               const GridSpec& grid) {
    return tabulate(grid, [&](double t) { return release_rate(p, spec, t); });
}

TimeSeries release_rate_derivative_series(const ChannelParams& p, const EigenSpectrum& spec,
                                          const GridSpec& grid) {
    return tabulate(grid, [&](double t) { return release_rate_derivative(p, spec, t); });
}

TimeSeries uniform_absorption_series(const AbsorptionConstants& c, const GridSpec& grid) {
    return tabulate(grid, [&](double t) { return uniform_absorption(c, t); });
}

TimeSeries point_source_prob_series(double r_alpha, const ChannelParams& p, const GridSpec& grid) {
    return tabulate(grid, [&](double t) { return point_source_prob(r_alpha, p, t); });
}

TimeSeries uniform_release_prob_series(const ChannelParams& p, const GridSpec& grid) {
    check_outside_observer(p);
    return tabulate(grid, [&](double t) { return uniform_release_prob(p, t); });
}

TimeSeries receptor_mix_series(const ChannelParams& p, const ReceptorLayout& layout,
                               const GridSpec& grid) {
    std::vector<double> dist, frac;
    for (const auto& r : layout.receptors) {
        dist.push_back(receptor_rx_distance(r, p));
        frac.push_back(r.area_fraction(p.r_T));
    }
    return tabulate(grid, [&](double t) {
        double s = 0;
        for (std::size_t i = 0; i < dist.size(); ++i)
            s += frac[i] * point_source_prob(dist[i], p, t);
        return s;
    });
}

TimeSeries absorbed_fraction(const ChannelParams& p, const EigenSpectrum& spec,
                             const ReceptorLayout& layout, const GridSpec& grid) {
    const auto c = absorption_constants(p, capacitance(layout, p.r_T).G_T);
    return convolve(release_rate_series(p, spec, grid), uniform_absorption_series(c, grid));
}

TimeSeries absorption_rate(const ChannelParams& p, const EigenSpectrum& spec,
                           const ReceptorLayout& layout, const GridSpec& grid) {
    const auto c = absorption_constants(p, capacitance(layout, p.r_T).G_T);
    return convolve(release_rate_derivative_series(p, spec, grid),
                    uniform_absorption_series(c, grid));
}

TimeSeries no_receptor_prob(const ChannelParams& p, const EigenSpectrum& spec,
                            const GridSpec& grid) {
    return convolve(release_rate_series(p, spec, grid), uniform_release_prob_series(p, grid));
}

TimeSeries receptor_loss_prob(const ChannelParams& p, const EigenSpectrum& spec,
                              const ReceptorLayout& layout, const GridSpec& grid) {
    if (layout.kind == LayoutKind::none)
        return tabulate(grid, [](double) { return 0.0; });
    const double A = layout.coverage(p.r_T);
    TimeSeries he = absorption_rate(p, spec, layout, grid);
    for (auto& v : he.values) v /= A;
    return convolve(he, receptor_mix_series(p, layout, grid));
}

double clamp_nonnegative(TimeSeries& s, const char* label) {
    double worst = 0;
    for (auto& v : s.values) {
        if (v < 0) {
            worst = std::max(worst, -v);
            v = 0.0;
        }
    }
    if (worst > 1e-8)
        std::fprintf(stderr, "note: clamped %s by up to %.3e (series truncation)\n", label, worst);
    return worst;
}

TimeSeries observed_prob(const ChannelParams& p, const EigenSpectrum& spec,
                         const ReceptorLayout& layout, const GridSpec& grid, ObservedMode mode) {
    TimeSeries out;
    switch (mode) {
        case ObservedMode::general: {
            TimeSeries pt = no_receptor_prob(p, spec, grid);
            if (layout.kind == LayoutKind::none) return pt;
            TimeSeries pr = receptor_loss_prob(p, spec, layout, grid);
            out = TimeSeries{pt.dt, std::vector<double>(pt.size())};
            for (std::size_t k = 0; k < pt.size(); ++k) out.values[k] = pt[k] - pr[k];
            break;
        }
        case ObservedMode::even_simplified: {
            if (layout.kind != LayoutKind::identical_even)
                throw ModeMismatch("observed_prob: even-simplified needs an identical-even layout");
            TimeSeries fc = release_rate_series(p, spec, grid);
            TimeSeries he = absorption_rate(p, spec, layout, grid);
            for (std::size_t k = 0; k < fc.size(); ++k) fc.values[k] -= he[k];
            out = convolve(fc, uniform_release_prob_series(p, grid));
            break;
        }
        case ObservedMode::single_simplified: {
            if (layout.kind != LayoutKind::single)
                throw ModeMismatch("observed_prob: single-simplified needs a single-receptor layout");
            const double d_s = receptor_rx_distance(layout.receptors.front(), p);
            TimeSeries pt = no_receptor_prob(p, spec, grid);
            TimeSeries lost = convolve(absorption_rate(p, spec, layout, grid),
                                       point_source_prob_series(d_s, p, grid));
            out = TimeSeries{pt.dt, std::vector<double>(pt.size())};
            for (std::size_t k = 0; k < pt.size(); ++k) out.values[k] = pt[k] - lost[k];
            break;
        }
    }
    clamp_nonnegative(out, "observed_prob");
    return out;
}

} // namespace mch
