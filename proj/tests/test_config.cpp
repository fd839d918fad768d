#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "mch/config.hpp"

using namespace mch;

namespace {

std::string write_tmp(const std::string& content) {
    std::string path = "test_scenario_tmp.cfg";
    std::ofstream out(path);
    out << content;
    return path;
}

} // namespace

TEST_CASE("defaults carry the reference parameter set") {
    auto sc = default_scenario();
    CHECK(sc.params.r_T == 5.0);
    CHECK(sc.params.r_R == 10.0);
    CHECK(sc.params.r_0 == 20.0);
    CHECK(sc.params.D_sigma == 79.4);
    CHECK(sc.params.k_d == 0.8);
    CHECK(sc.params.N_v == 200);
    CHECK(sc.params.eta == 20);
    CHECK(sc.link.Q == 10);
    CHECK(sc.link.T_b == 1.8);
    CHECK(sc.coverage == 0.1);
    CHECK(sc.n_receptors == 11);
    CHECK(sc.pbs_dt_s == 1e-5);
    CHECK(sc.pbs_realizations == 200);
    CHECK(sc.grid.horizon == 23.0);  // Q*T_b + 5
    CHECK(sc.pbs_horizon == 6.0);
}

TEST_CASE("file parsing with comments and overrides") {
    const auto path = write_tmp(
        "# scenario\n"
        "mu = 100        # generation rate\n"
        "layout = single\n"
        "coverage = 0.05\n"
        "single_direction = -1 0 0\n"
        "\n"
        "T_b = 1.5\n");
    auto sc = load_scenario(path, {"mu=50", "seed=9"});
    CHECK(sc.params.mu == 50.0);  // override wins
    CHECK(sc.link.T_b == 1.5);
    CHECK(sc.seed == 9);
    auto layout = sc.build_layout();
    CHECK(layout.kind == LayoutKind::single);
    CHECK(layout.coverage(5.0) == doctest::Approx(0.05));
    std::remove(path.c_str());
}

TEST_CASE("explicit receptors, both coordinate forms") {
    auto sc = default_scenario({
        "receptor=1.0 0 0 1",
        "receptor_sph=0.5 1.5707963267948966 3.141592653589793",
    });
    auto layout = sc.build_layout();
    CHECK(layout.size() == 2);
    CHECK(layout.receptors[0].direction.z == doctest::Approx(1.0));
    CHECK(layout.receptors[1].direction.x == doctest::Approx(-1.0));
    CHECK(layout.receptors[1].direction.z == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
}

TEST_CASE("bad input is a ConfigError") {
    CHECK_THROWS_AS(default_scenario({"nonsense=1"}), ConfigError);
    CHECK_THROWS_AS(default_scenario({"mu=fast"}), ConfigError);
    CHECK_THROWS_AS(default_scenario({"mu"}), ConfigError);
    CHECK_THROWS_AS(load_scenario("no_such_file.cfg", {}), ConfigError);
    const auto path = write_tmp("this line has no equals\n");
    CHECK_THROWS_AS(load_scenario(path, {}), ConfigError);
    std::remove(path.c_str());
    // physically invalid values surface from validate()
    CHECK_THROWS(default_scenario({"r_0=3"}));  // TX would contain the RX
}

TEST_CASE("manifest is deterministic and carries a content hash") {
    auto a = default_scenario({"mu=100"});
    auto b = default_scenario({"mu=100"});
    const auto ja = a.to_manifest_json("harvest");
    CHECK(ja == b.to_manifest_json("harvest"));
    CHECK(ja.find("content_hash") != std::string::npos);
    CHECK(ja != a.to_manifest_json("cir"));  // experiment id participates
}
