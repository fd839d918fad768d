#include "mch/capacitance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace mch {

double pair_interaction(const Vec3& li_unit, const Vec3& lj_unit) {
    if (std::fabs(li_unit.norm() - 1.0) > 1e-9 || std::fabs(lj_unit.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("pair_interaction: positions must be unit-scaled");
    const double d = (li_unit - lj_unit).norm();
    if (d < 1e-9) throw CoincidentReceptors("pair_interaction: coincident receptor positions");
    return 1.0 / d + 0.5 * std::log(d) - 0.5 * std::log(2.0 + d);
}

namespace {

double pair_sum(const ReceptorLayout& layout) {
    double s = 0;
    for (std::size_t i = 0; i < layout.size(); ++i)
        for (std::size_t j = i + 1; j < layout.size(); ++j)
            s += pair_interaction(layout.receptors[i].direction, layout.receptors[j].direction);
    return s;
}

} // namespace

CapacitanceResult capacitance_for_regime(const ReceptorLayout& layout, double r_T,
                                         LayoutKind regime) {
    if (regime == LayoutKind::none || layout.receptors.empty())
        throw RegimeUnsupported("capacitance: layout has no receptors");

    CapacitanceResult res;
    res.regime = regime;
    const std::size_t N = layout.size();
    const double Nd = static_cast<double>(N);

    double a_max = 0;
    for (const auto& r : layout.receptors) a_max = std::max(a_max, r.radius_um);
    const double kappa = a_max / r_T;  // reference scale tied to the largest receptor
    res.kappa = kappa;
    if (kappa > 0.7)
        std::fprintf(stderr, "warning: capacitance expansion used at kappa=%.3f (> 0.7)\n", kappa);

    double inv_G = 0;
    switch (regime) {
        case LayoutKind::single: {
            inv_G = M_PI / (kappa * r_T) *
                    (1.0 + kappa / M_PI * (std::log(2.0 * kappa) - 1.5) -
                     kappa * kappa / (M_PI * M_PI) * (M_PI * M_PI + 21.0) / 36.0);
            break;
        }
        case LayoutKind::identical_even: {
            inv_G = (1.0 / r_T) *
                    (1.0 + M_PI / (Nd * kappa) +
                     (0.5 * std::log(kappa * std::sqrt(Nd)) + std::log(2.0) - 1.5) / Nd -
                     2.0 / std::sqrt(Nd) + std::pow(Nd, -1.5));
            break;
        }
        case LayoutKind::identical_any: {
            const double F = pair_sum(layout);
            inv_G = M_PI / (Nd * kappa * r_T) *
                    (1.0 + kappa / M_PI * (std::log(2.0 * kappa) - 1.5 + 4.0 / Nd * F));
            break;
        }
        case LayoutKind::general: {
            res.m.resize(N);
            res.s.resize(N);
            double m_sum = 0, m2_sum = 0, m3_sum = 0, ms_sum = 0;
            for (std::size_t i = 0; i < N; ++i) {
                const double a = layout.receptors[i].radius_um;
                res.m[i] = 2.0 * a / (r_T * kappa * M_PI);
                res.s[i] = res.m[i] / 2.0 * (std::log(4.0 * a / (r_T * kappa)) - 1.5);
                m_sum += res.m[i];
                m2_sum += res.m[i] * res.m[i];
                m3_sum += res.m[i] * res.m[i] * res.m[i];
                ms_sum += res.m[i] * res.s[i];
            }
            res.m_bar = m_sum / Nd;
            res.vartheta = m2_sum * m2_sum / (Nd * res.m_bar) - m3_sum;
            double Fw = 0;
            for (std::size_t i = 0; i < N; ++i)
                for (std::size_t j = i + 1; j < N; ++j)
                    Fw += res.m[i] * res.m[j] *
                          pair_interaction(layout.receptors[i].direction,
                                           layout.receptors[j].direction);
            const double lk2 = std::log(kappa / 2.0);
            inv_G = 2.0 / (Nd * res.m_bar * kappa * r_T) *
                    (1.0 + kappa / (2.0 * Nd * res.m_bar) * lk2 * m2_sum +
                     kappa / (Nd * res.m_bar) * (ms_sum + 2.0 * Fw) +
                     kappa * lk2 * kappa * lk2 * res.vartheta / (4.0 * Nd * res.m_bar));
            break;
        }
        case LayoutKind::none:
            break;  // unreachable
    }

    res.G_T = 1.0 / inv_G;
    if (!(res.G_T > 0.0) || res.G_T >= r_T)
        throw std::runtime_error("capacitance: G_T outside (0, r_T); expansion out of validity");
    return res;
}

CapacitanceResult capacitance(const ReceptorLayout& layout, double r_T) {
    return capacitance_for_regime(layout, r_T, layout.kind);
}

} // namespace mch
