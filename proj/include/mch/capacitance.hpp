#ifndef MCH_CAPACITANCE_HPP
#define MCH_CAPACITANCE_HPP

#include <stdexcept>
#include <vector>

#include "mch/receptors.hpp"

namespace mch {

// Diffusive "capacitance" G_T of the receptor-covered TX sphere: the scalar
// that summarizes the layout's total absorbing strength. Evaluated from the
// matched-asymptotics expansions for the four layout regimes; the dropped
// higher-order terms mean these are small-kappa expansions (a warning is
// emitted above kappa = 0.7, where the single-receptor reference case of the
// source material already operates).
struct CapacitanceResult {
    double G_T = 0;            // [um]
    LayoutKind regime = LayoutKind::none;
    // intermediate terms kept for inspection
    double kappa = 0;          // reference scale: max_i a_i / r_T
    std::vector<double> m;     // m_i = 2 a_i / (r_T kappa pi)
    double m_bar = 0;
    std::vector<double> s;     // s_i = m_i/2 (ln(4 a_i/(r_T kappa)) - 3/2)
    double vartheta = 0;
};

struct CoincidentReceptors : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RegimeUnsupported : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pair-interaction term of the general-layout expansion, evaluated on
// unit-scaled receptor positions (|l'| = 1):
//   F = 1/|d| + ln(|d|)/2 - ln(2 + |d|)/2,  d = l_i' - l_j'.
double pair_interaction(const Vec3& li_unit, const Vec3& lj_unit);

// G_T for a validated layout, dispatching on its kind tag.
CapacitanceResult capacitance(const ReceptorLayout& layout, double r_T);

// Same computation with the regime forced (used to cross-check the rows
// against each other on compatible layouts).
CapacitanceResult capacitance_for_regime(const ReceptorLayout& layout, double r_T,
                                         LayoutKind regime);

} // namespace mch

#endif
