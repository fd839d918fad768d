#ifndef MCH_RECEPTORS_HPP
#define MCH_RECEPTORS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "mch/params.hpp"

namespace mch {

struct Vec3 {
    double x = 0, y = 0, z = 0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
};

// Unit direction from spherical angles: theta = polar angle from +z,
// phi = azimuth from +x. (The source material mixes conventions; this is the
// one consistent with the receptor-to-RX distance formula, which needs
// cos(phi) sin(theta) to be the x-direction cosine.)
Vec3 direction_from_spherical(double theta, double phi);

// An absorbing circular patch on the TX sphere. The direction is the unit
// vector from the TX center to the patch center; radius_um is the patch
// radius a_i. Area fraction A_i = a_i^2 / (4 r_T^2).
struct Receptor {
    double radius_um = 0;
    Vec3 direction;

    double area_fraction(double r_T) const {
        return radius_um * radius_um / (4.0 * r_T * r_T);
    }
};

enum class LayoutKind { general, identical_any, identical_even, single, none };

const char* to_string(LayoutKind k);

struct ReceptorLayout {
    std::vector<Receptor> receptors;
    LayoutKind kind = LayoutKind::none;
    bool from_even_lattice = false;  // set by fibonacci_layout, used for kind inference

    std::size_t size() const { return receptors.size(); }

    // Total coverage ratio, recomputed from the members.
    double coverage(double r_T) const {
        double a = 0;
        for (const auto& r : receptors) a += r.area_fraction(r_T);
        return a;
    }
};

struct LayoutError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OverlapError : LayoutError { using LayoutError::LayoutError; };
struct UnitNormError : LayoutError { using LayoutError::LayoutError; };
struct NonPositiveRadius : LayoutError { using LayoutError::LayoutError; };

// Checks unit norms, positive radii and pairwise non-overlap
// (|l_i - l_j| >= a_i + a_j on chord distances), and stamps the kind tag:
// none / single / identical-even (equal radii, built by the lattice
// generator) / identical-any (equal radii) / general.
ReceptorLayout validate_layout(ReceptorLayout layout, const ChannelParams& params);

// N_r identical receptors with total coverage A, placed on a Fibonacci
// lattice: point k at z_k = 1 - (2k+1)/N, azimuth 2 pi k (1 - 1/golden).
ReceptorLayout fibonacci_layout(int n_receptors, double coverage, double r_T);

ReceptorLayout single_receptor_layout(double coverage, double r_T, const Vec3& direction);

// Distance between a receptor's center and the RX center at (r_0, 0, 0).
double receptor_rx_distance(const Receptor& receptor, const ChannelParams& params);

} // namespace mch

#endif
