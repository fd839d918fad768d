// Experiment runner: evaluates the closed-form channel quantities, the NFM
// variants, the BER sweeps and the particle-based validation, writing CSV
// series and a JSON manifest per run.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mch/config.hpp"
#include "mch/io.hpp"

using namespace mch;
namespace fs = std::filesystem;

namespace {

struct RunContext {
    Scenario scenario;
    fs::path out;
    bool quiet = false;

    void say(const std::string& msg) const {
        if (!quiet) std::printf("%s\n", msg.c_str());
    }
    std::string path(const std::string& name) const { return (out / name).string(); }
};

EigenSpectrum spectrum_for(const ChannelParams& p) {
    return solve_spectrum_auto(p.D_v, p.k_f, p.r_T);
}

void write_manifest(const RunContext& ctx, const std::string& experiment) {
    write_text(ctx.path("manifest.json"), ctx.scenario.to_manifest_json(experiment));
}

const std::vector<double> kMuFamily{50.0, 100.0, 200.0};

int run_release_rate(RunContext& ctx) {
    for (double mu : kMuFamily) {
        ChannelParams p = ctx.scenario.params;
        p.mu = mu;
        const auto spec = spectrum_for(p);
        GridSpec g{ctx.scenario.grid.dt, 4.0};
        auto fc = release_rate_series(p, spec, g);
        char name[64];
        std::snprintf(name, sizeof name, "release_rate_mu%.0f.csv", mu);
        write_timeseries_csv(ctx.path(name), "f_c_per_s", fc);
        ctx.say(std::string("wrote ") + name);
    }
    return 0;
}

int run_harvest(RunContext& ctx) {
    const auto layout = ctx.scenario.build_layout();
    nlohmann::json summary;
    for (double mu : kMuFamily) {
        ChannelParams p = ctx.scenario.params;
        p.mu = mu;
        const auto spec = spectrum_for(p);
        auto He = absorbed_fraction(p, spec, layout, ctx.scenario.grid);
        auto he = absorption_rate(p, spec, layout, ctx.scenario.grid);
        char n1[64], n2[64];
        std::snprintf(n1, sizeof n1, "absorbed_fraction_mu%.0f.csv", mu);
        std::snprintf(n2, sizeof n2, "absorption_rate_mu%.0f.csv", mu);
        write_timeseries_csv(ctx.path(n1), "H_e", He);
        write_timeseries_csv(ctx.path(n2), "h_e_per_s", he);
        summary["He_horizon"][std::to_string(static_cast<int>(mu))] = He.values.back();
    }
    const auto cap = capacitance(layout, ctx.scenario.params.r_T);
    const auto consts = absorption_constants(ctx.scenario.params, cap.G_T);
    summary["G_T_um"] = cap.G_T;
    summary["He_infinity"] = absorbed_fraction_limit(consts);
    write_text(ctx.path("harvest_summary.json"), summary.dump(2));
    ctx.say("wrote harvest_summary.json");
    return 0;
}

int run_cir(RunContext& ctx) {
    const auto layout = ctx.scenario.build_layout();
    for (double mu : kMuFamily) {
        ChannelParams p = ctx.scenario.params;
        p.mu = mu;
        const auto spec = spectrum_for(p);
        auto pt = no_receptor_prob(p, spec, ctx.scenario.grid);
        char name[64];
        std::snprintf(name, sizeof name, "signal_no_receptor_mu%.0f.csv", mu);
        write_timeseries_csv(ctx.path(name), "P_T", pt);
        if (layout.kind != LayoutKind::none) {
            auto pr = receptor_loss_prob(p, spec, layout, ctx.scenario.grid);
            auto pg = observed_prob(p, spec, layout, ctx.scenario.grid, ObservedMode::general);
            std::snprintf(name, sizeof name, "signal_loss_mu%.0f.csv", mu);
            write_timeseries_csv(ctx.path(name), "P_r", pr);
            std::snprintf(name, sizeof name, "signal_mu%.0f.csv", mu);
            write_timeseries_csv(ctx.path(name), "P", pg);
            if (layout.kind == LayoutKind::identical_even) {
                auto ps = observed_prob(p, spec, layout, ctx.scenario.grid,
                                        ObservedMode::even_simplified);
                std::snprintf(name, sizeof name, "signal_even_simplified_mu%.0f.csv", mu);
                write_timeseries_csv(ctx.path(name), "P", ps);
            } else if (layout.kind == LayoutKind::single) {
                auto ps = observed_prob(p, spec, layout, ctx.scenario.grid,
                                        ObservedMode::single_simplified);
                std::snprintf(name, sizeof name, "signal_single_simplified_mu%.0f.csv", mu);
                write_timeseries_csv(ctx.path(name), "P", ps);
            }
        }
        ctx.say("wrote signal CSVs for mu=" + std::to_string(static_cast<int>(mu)));
    }
    return 0;
}

int run_nfm_chi(RunContext& ctx) {
    const auto layout = ctx.scenario.build_layout();
    const auto cap = capacitance(layout, ctx.scenario.params.r_T);
    for (double mu : kMuFamily) {
        ChannelParams p = ctx.scenario.params;
        p.mu = mu;
        const auto spec = spectrum_for(p);
        const auto consts = absorption_constants(p, cap.G_T);
        std::vector<double> th, chi, cnt;
        for (double t = 0.02; t <= 3.0 + 1e-9; t += 0.02) {
            th.push_back(t);
            chi.push_back(recyclable_fraction(p, spec, consts, t));
            cnt.push_back(recyclable_count(p, spec, consts, t));
        }
        char name[64];
        std::snprintf(name, sizeof name, "recyclable_mu%.0f.csv", mu);
        write_csv(ctx.path(name), {"t_hat_seconds", "chi_fraction", "chi_count"},
                  {&th, &chi, &cnt});
        ctx.say(std::string("wrote ") + name);
    }
    return 0;
}

int run_nfm_signal(RunContext& ctx) {
    const auto layout = ctx.scenario.build_layout();
    ChannelParams p = ctx.scenario.params;
    const auto spec = spectrum_for(p);
    auto pn = observed_prob(p, spec, layout, ctx.scenario.grid);
    write_timeseries_csv(ctx.path("signal_no_nfm.csv"), "P", pn);
    for (double th : {1.0, 1.6, 2.0}) {
        NfmConfig nfm{th, ctx.scenario.epsilon};
        auto ph = nfm_observed_prob(p, spec, layout, nfm, ctx.scenario.grid);
        char name[64];
        std::snprintf(name, sizeof name, "signal_nfm_that%.1f.csv", th);
        write_timeseries_csv(ctx.path(name), "P_hat", ph);
    }
    ctx.say("wrote NFM signal CSVs");
    return 0;
}

int run_ber(RunContext& ctx) {
    const auto layout = ctx.scenario.build_layout();
    const LinkConfig link = ctx.scenario.link;
    GridSpec g{ctx.scenario.grid.dt, link.Q * link.T_b + 0.5};
    for (double mu : kMuFamily) {
        ChannelParams p = ctx.scenario.params;
        p.mu = mu;
        const auto spec = spectrum_for(p);
        auto ph = observed_prob(p, spec, layout, g);
        const double td1 = detection_time(ph, link.T_b);
        std::vector<double> om, ber;
        double psi_all = 0;
        for (int m = 0; m < link.Q; ++m)
            psi_all += p.N_v * p.eta * ph.sample_at(m * link.T_b + td1);
        const long long om_hi = static_cast<long long>(std::ceil(3.0 * psi_all)) + 1;
        for (long long o = 0; o <= om_hi; ++o) {
            om.push_back(static_cast<double>(o));
            ber.push_back(average_ber(link, ph, o, td1, p.N_v, p.eta));
        }
        char name[64];
        std::snprintf(name, sizeof name, "ber_vs_threshold_mu%.0f.csv", mu);
        write_csv(ctx.path(name), {"omega", "avg_ber"}, {&om, &ber});
        ctx.say(std::string("wrote ") + name);
    }
    // NFM variants at the scenario's own mu
    {
        ChannelParams p = ctx.scenario.params;
        const auto spec = spectrum_for(p);
        for (double th : {1.0, 1.6, 2.0}) {
            NfmConfig nfm{th, ctx.scenario.epsilon};
            auto ph = nfm_observed_prob(p, spec, layout, nfm, g);
            const double td1 = detection_time(ph, link.T_b);
            std::vector<double> om, ber;
            double psi_all = 0;
            for (int m = 0; m < link.Q; ++m)
                psi_all += p.N_v * p.eta * ph.sample_at(m * link.T_b + td1);
            const long long om_hi = static_cast<long long>(std::ceil(3.0 * psi_all)) + 1;
            for (long long o = 0; o <= om_hi; ++o) {
                om.push_back(static_cast<double>(o));
                ber.push_back(average_ber(link, ph, o, td1, p.N_v, p.eta));
            }
            char name[64];
            std::snprintf(name, sizeof name, "ber_vs_threshold_nfm_that%.1f.csv", th);
            write_csv(ctx.path(name), {"omega", "avg_ber"}, {&om, &ber});
            ctx.say(std::string("wrote ") + name);
        }
    }
    return 0;
}

int run_table_min_ber(RunContext& ctx) {
    const auto layout = ctx.scenario.build_layout();
    const auto cap = capacitance(layout, ctx.scenario.params.r_T);
    struct Row {
        double mu, T_b;
    };
    const std::vector<Row> rows{{50, 1.8}, {100, 1.8}, {200, 1.8}, {200, 1.5}, {200, 2.1}};
    auto table = nlohmann::json::array();
    for (const auto& row : rows) {
        ChannelParams p = ctx.scenario.params;
        p.mu = row.mu;
        LinkConfig link = ctx.scenario.link;
        link.T_b = row.T_b;
        const auto spec = spectrum_for(p);
        const auto consts = absorption_constants(p, cap.G_T);
        GridSpec g{ctx.scenario.grid.dt, link.Q * link.T_b + 0.5};
        std::vector<double> th_grid;
        for (double t = 0.5; t <= link.T_b + 0.5 + 1e-9; t += 0.02) th_grid.push_back(t);
        const auto reports = sweep_nfm(link, p, spec, layout, th_grid, g);
        const auto& best = best_report(reports);
        table.push_back({{"mu", row.mu},
                         {"T_b", row.T_b},
                         {"optimal_t_hat", best.t_hat},
                         {"omega", best.omega},
                         {"min_ber", best.avg_ber},
                         {"recyclable_with_nfm", best.recyclable_fraction},
                         {"recyclable_without_nfm", absorbed_fraction_limit(consts)}});
        ctx.say("row mu=" + std::to_string(static_cast<int>(row.mu)) +
                " T_b=" + std::to_string(row.T_b) + " done");
    }
    write_text(ctx.path("min_ber_table.json"), table.dump(2));
    ctx.say("wrote min_ber_table.json");
    return 0;
}

int run_pbs_validate(RunContext& ctx) {
    const auto layout = ctx.scenario.build_layout();
    ChannelParams p = ctx.scenario.params;
    PbsConfig pc = ctx.scenario.build_pbs();
    if (ctx.scenario.t_hat > 0 && ctx.scenario.t_hat < pc.horizon)
        pc.nfm = NfmConfig{ctx.scenario.t_hat, ctx.scenario.epsilon};

    const auto spec = spectrum_for(p);
    const auto ens = run_ensemble(pc);
    const std::size_t nb = ens.mean.bins();
    std::vector<double> t(nb);
    for (std::size_t b = 0; b < nb; ++b) t[b] = b * ens.mean.bin_width;
    write_csv(ctx.path("pbs_ensemble.csv"),
              {"bin_t", "released", "absorbed", "degraded", "inside_RX", "still_in_TX",
               "se_released", "se_absorbed", "se_degraded", "se_inside_RX", "se_still_in_TX"},
              {&t, &ens.mean.released, &ens.mean.absorbed, &ens.mean.degraded,
               &ens.mean.inside_rx, &ens.mean.still_in_tx, &ens.stderr_.released,
               &ens.stderr_.absorbed, &ens.stderr_.degraded, &ens.stderr_.inside_rx,
               &ens.stderr_.still_in_tx});

    const double total = static_cast<double>(p.N_v) * p.eta;
    bool ok = true;
    nlohmann::json rep;

    // conservation ledger
    double worst = 0;
    for (std::size_t b = 0; b < nb; ++b) {
        // per-bin identities hold per realization, so they hold for the mean
        worst = std::max(worst, std::fabs(ens.mean.released[b] + ens.mean.still_in_tx[b] - total));
        if (ens.mean.absorbed[b] + ens.mean.degraded[b] > ens.mean.released[b] + 1e-9) ok = false;
    }
    rep["conservation_worst"] = worst;
    if (worst > 1e-9) ok = false;

    GridSpec ana_grid{ctx.scenario.grid.dt, pc.horizon};
    if (layout.kind != LayoutKind::none && !pc.nfm) {
        auto He = absorbed_fraction(p, spec, layout, ana_grid);
        const double sim = ens.mean.absorbed.back() / total;
        const double se = ens.stderr_.absorbed.back() / total;
        const double ana = He.values.back();
        rep["absorbed_fraction"] = {{"sim", sim}, {"analytic", ana}, {"se", se}};
        if (std::fabs(sim - ana) > 3.0 * se) {
            ok = false;
            rep["absorbed_fraction"]["verdict"] = "outside 3 SE";
        }
        auto P = observed_prob(p, spec, layout, ana_grid);
        const double peak_ana = total * P.max();
        std::size_t bpk = 0;
        for (std::size_t b = 1; b < nb; ++b)
            if (ens.mean.inside_rx[b] > ens.mean.inside_rx[bpk]) bpk = b;
        const double peak_sim = ens.mean.inside_rx[bpk];
        const double peak_se = ens.stderr_.inside_rx[bpk];
        rep["inside_rx_peak"] = {{"sim", peak_sim}, {"analytic", peak_ana}, {"se", peak_se}};
        if (std::fabs(peak_sim - peak_ana) > 3.0 * peak_se) {
            ok = false;
            rep["inside_rx_peak"]["verdict"] = "outside 3 SE";
        }
    }
    rep["pass"] = ok;
    write_text(ctx.path("pbs_validation.json"), rep.dump(2));
    ctx.say(std::string("pbs-validate: ") + (ok ? "PASS" : "FAIL"));
    return ok ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"molecule-harvesting MC channel toolkit"};
    std::string experiment, config_path, out_dir = "out";
    std::vector<std::string> overrides;
    bool quiet = false;
    std::uint64_t seed = 0;
    int realizations = 0;
    double dt_s = 0;

    app.add_option("experiment", experiment,
                   "one of: release-rate harvest cir nfm-chi nfm-signal ber "
                   "pbs-validate table-min-ber")
        ->required();
    app.add_option("--config", config_path, "key = value scenario file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--set", overrides, "override, key=value (repeatable)");
    app.add_option("--seed", seed, "PBS master seed");
    app.add_option("--realizations", realizations, "PBS realizations");
    app.add_option("--dt-s", dt_s, "PBS step [s]");
    app.add_flag("--quiet", quiet, "suppress progress output");
    CLI11_PARSE(app, argc, argv);

    using Runner = int (*)(RunContext&);
    const std::map<std::string, Runner> runners{
        {"release-rate", run_release_rate}, {"harvest", run_harvest},
        {"cir", run_cir},                   {"nfm-chi", run_nfm_chi},
        {"nfm-signal", run_nfm_signal},     {"ber", run_ber},
        {"table-min-ber", run_table_min_ber}, {"pbs-validate", run_pbs_validate}};

    RunContext ctx;
    ctx.quiet = quiet;
    try {
        const auto it = runners.find(experiment);
        if (it == runners.end()) throw ConfigError("unknown experiment '" + experiment + "'");
        ctx.scenario = load_scenario(config_path, overrides);
        if (seed) ctx.scenario.seed = seed;
        if (realizations) ctx.scenario.pbs_realizations = realizations;
        if (dt_s > 0) ctx.scenario.pbs_dt_s = dt_s;
        ctx.out = out_dir;
        fs::create_directories(ctx.out);
        write_manifest(ctx, experiment);
        return it->second(ctx);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
