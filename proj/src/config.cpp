#include "mch/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mch {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_num(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("config: invalid numeric value '" + v + "' for key '" + key + "'");
    }
}

std::vector<double> to_nums(const std::string& key, const std::string& v, std::size_t n) {
    std::istringstream is(v);
    std::vector<double> out;
    double x;
    while (is >> x) out.push_back(x);
    if (out.size() != n)
        throw ConfigError("config: key '" + key + "' expects " + std::to_string(n) + " numbers");
    return out;
}

} // namespace

ReceptorLayout Scenario::build_layout() const {
    switch (layout_kind) {
        case LayoutSpecKind::none:
            return validate_layout(ReceptorLayout{}, params);
        case LayoutSpecKind::fibonacci:
            return fibonacci_layout(n_receptors, coverage, params.r_T);
        case LayoutSpecKind::single:
            return single_receptor_layout(coverage, params.r_T, single_direction);
        case LayoutSpecKind::explicit_list: {
            ReceptorLayout l;
            l.receptors = explicit_receptors;
            return validate_layout(std::move(l), params);
        }
    }
    throw ConfigError("config: unknown layout kind");
}

PbsConfig Scenario::build_pbs() const {
    PbsConfig c;
    c.params = params;
    c.layout = build_layout();
    c.dt_s = pbs_dt_s;
    c.horizon = pbs_horizon;
    c.bin_width = pbs_bin_width;
    c.realizations = pbs_realizations;
    c.seed = seed;
    c.cull_radius = cull_radius;
    c.far_field_jumps = far_field_jumps;
    // c.nfm stays unset; experiments that simulate NFM fill it from t_hat
    return c;
}

void Scenario::apply(const std::string& rawkey, const std::string& rawval) {
    const std::string key = trim(rawkey), v = trim(rawval);
    if (key == "r_T") params.r_T = to_num(key, v);
    else if (key == "r_R") params.r_R = to_num(key, v);
    else if (key == "r_0") params.r_0 = to_num(key, v);
    else if (key == "D_v") params.D_v = to_num(key, v);
    else if (key == "D_sigma") params.D_sigma = to_num(key, v);
    else if (key == "k_f") params.k_f = to_num(key, v);
    else if (key == "k_d") params.k_d = to_num(key, v);
    else if (key == "N_v") params.N_v = static_cast<int>(to_num(key, v));
    else if (key == "eta") params.eta = static_cast<int>(to_num(key, v));
    else if (key == "mu") params.mu = to_num(key, v);
    else if (key == "layout") {
        if (v == "fibonacci") layout_kind = LayoutSpecKind::fibonacci;
        else if (v == "single") layout_kind = LayoutSpecKind::single;
        else if (v == "none") layout_kind = LayoutSpecKind::none;
        else if (v == "explicit") layout_kind = LayoutSpecKind::explicit_list;
        else throw ConfigError("config: unknown layout '" + v + "'");
    }
    else if (key == "coverage" || key == "A") coverage = to_num(key, v);
    else if (key == "N_r") n_receptors = static_cast<int>(to_num(key, v));
    else if (key == "single_direction") {
        const auto xyz = to_nums(key, v, 3);
        single_direction = {xyz[0], xyz[1], xyz[2]};
    }
    else if (key == "receptor") {
        const auto av = to_nums(key, v, 4);
        Vec3 d{av[1], av[2], av[3]};
        const double n = d.norm();
        if (n <= 0) throw ConfigError("config: receptor direction must be nonzero");
        explicit_receptors.push_back({av[0], {d.x / n, d.y / n, d.z / n}});
        layout_kind = LayoutSpecKind::explicit_list;
    }
    else if (key == "receptor_sph") {
        const auto av = to_nums(key, v, 3);  // a_um theta phi
        explicit_receptors.push_back({av[0], direction_from_spherical(av[1], av[2])});
        layout_kind = LayoutSpecKind::explicit_list;
    }
    else if (key == "dt") grid.dt = to_num(key, v);
    else if (key == "horizon") grid.horizon = to_num(key, v);
    else if (key == "Q") link.Q = static_cast<int>(to_num(key, v));
    else if (key == "T_b") link.T_b = to_num(key, v);
    else if (key == "P0") { link.P0 = to_num(key, v); link.P1 = 1.0 - link.P0; }
    else if (key == "t_hat") t_hat = to_num(key, v);
    else if (key == "epsilon") epsilon = to_num(key, v);
    else if (key == "pbs_dt_s" || key == "dt_s") pbs_dt_s = to_num(key, v);
    else if (key == "pbs_horizon") pbs_horizon = to_num(key, v);
    else if (key == "pbs_bin_width") pbs_bin_width = to_num(key, v);
    else if (key == "pbs_realizations" || key == "realizations")
        pbs_realizations = static_cast<int>(to_num(key, v));
    else if (key == "seed") seed = static_cast<std::uint64_t>(to_num(key, v));
    else if (key == "cull_radius") cull_radius = to_num(key, v);
    else if (key == "far_field_jumps") far_field_jumps = to_num(key, v) != 0;
    else throw ConfigError("config: unknown key '" + key + "'");
}

std::string Scenario::to_manifest_json(const std::string& experiment) const {
    nlohmann::json j;
    j["experiment"] = experiment;
    j["params"] = {{"r_T", params.r_T}, {"r_R", params.r_R}, {"r_0", params.r_0},
                   {"D_v", params.D_v}, {"D_sigma", params.D_sigma}, {"k_f", params.k_f},
                   {"k_d", params.k_d}, {"N_v", params.N_v}, {"eta", params.eta},
                   {"mu", params.mu}};
    const char* lk = layout_kind == LayoutSpecKind::fibonacci ? "fibonacci"
                   : layout_kind == LayoutSpecKind::single    ? "single"
                   : layout_kind == LayoutSpecKind::none      ? "none"
                                                              : "explicit";
    j["layout"] = {{"kind", lk}, {"coverage", coverage}, {"N_r", n_receptors},
                   {"single_direction", {single_direction.x, single_direction.y,
                                         single_direction.z}}};
    if (!explicit_receptors.empty()) {
        auto arr = nlohmann::json::array();
        for (const auto& r : explicit_receptors)
            arr.push_back({{"a", r.radius_um},
                           {"dir", {r.direction.x, r.direction.y, r.direction.z}}});
        j["layout"]["receptors"] = arr;
    }
    j["grid"] = {{"dt", grid.dt}, {"horizon", grid.horizon}};
    j["link"] = {{"Q", link.Q}, {"T_b", link.T_b}, {"P0", link.P0}, {"P1", link.P1}};
    j["nfm"] = {{"t_hat", t_hat}, {"epsilon", epsilon}};
    j["pbs"] = {{"dt_s", pbs_dt_s}, {"horizon", pbs_horizon}, {"bin_width", pbs_bin_width},
                {"realizations", pbs_realizations}, {"seed", seed},
                {"cull_radius", cull_radius}, {"far_field_jumps", far_field_jumps}};
    // content hash over the canonical dump (FNV-1a 64)
    const std::string dump = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char hex[19];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    j["content_hash"] = hex;
    return j.dump(2);
}

Scenario load_scenario(const std::string& config_path,
                       const std::vector<std::string>& overrides) {
    Scenario sc;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("config: cannot open '" + config_path + "'");
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config: line " + std::to_string(lineno) +
                                  " is not 'key = value'");
            sc.apply(line.substr(0, eq), line.substr(eq + 1));
        }
    }
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: override '" + ov + "' is not key=value");
        sc.apply(ov.substr(0, eq), ov.substr(eq + 1));
    }
    sc.params.validate();
    sc.grid.validate();
    sc.link.validate();
    return sc;
}

Scenario default_scenario(const std::vector<std::string>& overrides) {
    return load_scenario("", overrides);
}

} // namespace mch
