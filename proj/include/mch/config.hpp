#ifndef MCH_CONFIG_HPP
#define MCH_CONFIG_HPP

#include <string>
#include <vector>

#include "mch/link.hpp"
#include "mch/pbs.hpp"

// Scenario definition: one key = value file (plus command-line overrides)
// carrying the physical parameters, the receptor layout, the grids and the
// link settings. Defaults reproduce the reference parameter set.

namespace mch {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LayoutSpecKind { fibonacci, single, none, explicit_list };

struct Scenario {
    ChannelParams params;

    LayoutSpecKind layout_kind = LayoutSpecKind::fibonacci;
    double coverage = 0.1;
    int n_receptors = 11;
    Vec3 single_direction{-1, 0, 0};
    // explicit receptors: radius [um] + unit direction
    std::vector<Receptor> explicit_receptors;

    GridSpec grid{1e-3, 23.0};  // default horizon: Q*T_b + 5 s
    LinkConfig link;
    double t_hat = 1.6;       // NFM stop time for nfm experiments
    double epsilon = 1e-3;    // central-difference step

    double pbs_dt_s = 1e-5;
    double pbs_horizon = 6.0;
    double pbs_bin_width = 0.01;
    int pbs_realizations = 200;
    std::uint64_t seed = 1;
    double cull_radius = 0.0;
    bool far_field_jumps = true;

    ReceptorLayout build_layout() const;
    PbsConfig build_pbs() const;

    void apply(const std::string& key, const std::string& value);
    std::string to_manifest_json(const std::string& experiment) const;
};

Scenario load_scenario(const std::string& config_path,
                       const std::vector<std::string>& overrides);

// defaults only, plus overrides
Scenario default_scenario(const std::vector<std::string>& overrides = {});

} // namespace mch

#endif
