#include "mch/receptors.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace mch {

Vec3 direction_from_spherical(double theta, double phi) {
    const double st = std::sin(theta);
    return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

const char* to_string(LayoutKind k) {
    switch (k) {
        case LayoutKind::general: return "general";
        case LayoutKind::identical_any: return "identical-any";
        case LayoutKind::identical_even: return "identical-even";
        case LayoutKind::single: return "single";
        case LayoutKind::none: return "none";
    }
    return "?";
}

ReceptorLayout validate_layout(ReceptorLayout layout, const ChannelParams& params) {
    const double r_T = params.r_T;
    if (layout.receptors.empty()) {
        layout.kind = LayoutKind::none;
        return layout;
    }
    for (std::size_t i = 0; i < layout.receptors.size(); ++i) {
        const auto& r = layout.receptors[i];
        if (r.radius_um <= 0) {
            throw NonPositiveRadius("receptor " + std::to_string(i) + " has non-positive radius");
        }
        if (std::fabs(r.direction.norm() - 1.0) > 1e-12) {
            throw UnitNormError("receptor " + std::to_string(i) + " direction is not unit length");
        }
        if (r.radius_um > 0.5 * r_T) {
            std::fprintf(stderr, "warning: receptor %zu radius %.4g um is large relative to r_T=%.4g\n",
                         i, r.radius_um, r_T);
        }
    }
    for (std::size_t i = 0; i < layout.receptors.size(); ++i) {
        for (std::size_t j = i + 1; j < layout.receptors.size(); ++j) {
            const Vec3 li = layout.receptors[i].direction * r_T;
            const Vec3 lj = layout.receptors[j].direction * r_T;
            const double chord = (li - lj).norm();
            const double need = layout.receptors[i].radius_um + layout.receptors[j].radius_um;
            if (chord < need) {
                std::ostringstream os;
                os << "receptors " << i << " and " << j << " overlap: chord distance "
                   << chord << " < " << need;
                throw OverlapError(os.str());
            }
        }
    }
    if (layout.receptors.size() == 1) {
        layout.kind = LayoutKind::single;
        return layout;
    }
    bool identical = true;
    const double a0 = layout.receptors.front().radius_um;
    for (const auto& r : layout.receptors)
        if (std::fabs(r.radius_um - a0) > 1e-9) { identical = false; break; }
    if (identical) {
        layout.kind = layout.from_even_lattice ? LayoutKind::identical_even
                                               : LayoutKind::identical_any;
    } else {
        layout.kind = LayoutKind::general;
    }
    return layout;
}

ReceptorLayout fibonacci_layout(int n_receptors, double coverage, double r_T) {
    if (n_receptors < 1) throw LayoutError("fibonacci_layout: need at least one receptor");
    if (coverage <= 0 || coverage >= 1) throw LayoutError("fibonacci_layout: coverage must be in (0,1)");
    const double a = 2.0 * r_T * std::sqrt(coverage / n_receptors);
    const double golden_conj = 2.0 * M_PI * (1.0 - 1.0 / ((1.0 + std::sqrt(5.0)) / 2.0));
    ReceptorLayout layout;
    layout.from_even_lattice = true;
    for (int k = 0; k < n_receptors; ++k) {
        const double z = 1.0 - (2.0 * k + 1.0) / n_receptors;
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden_conj * k;
        layout.receptors.push_back({a, {rho * std::cos(phi), rho * std::sin(phi), z}});
    }
    ChannelParams p;
    p.r_T = r_T;
    return validate_layout(std::move(layout), p);
}

ReceptorLayout single_receptor_layout(double coverage, double r_T, const Vec3& direction) {
    const double a = 2.0 * r_T * std::sqrt(coverage);
    ReceptorLayout layout;
    const double n = direction.norm();
    layout.receptors.push_back({a, {direction.x / n, direction.y / n, direction.z / n}});
    ChannelParams p;
    p.r_T = r_T;
    return validate_layout(std::move(layout), p);
}

double receptor_rx_distance(const Receptor& receptor, const ChannelParams& params) {
    const Vec3 center = receptor.direction * params.r_T;
    const Vec3 rx{params.r_0, 0.0, 0.0};
    return (center - rx).norm();
}

} // namespace mch
