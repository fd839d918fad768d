#include "mch/pbs.hpp"

#include <algorithm>
#include <cmath>

#include "mch/rng.hpp"

namespace mch {

// ---- xoshiro256++ ----

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : s_) w = splitmix64(x);
}

std::uint64_t Xoshiro256pp::next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

void Xoshiro256pp::jump() {
    static constexpr std::uint64_t kJump[] = {0x180ec6d33cfd0abaull, 0xd5a61266f0c9392cull,
                                              0xa9582618e03fc9aaull, 0x39abdc4529b1661cull};
    std::uint64_t t[4] = {0, 0, 0, 0};
    for (std::uint64_t word : kJump) {
        for (int b = 0; b < 64; ++b) {
            if (word & (1ull << b)) {
                t[0] ^= s_[0];
                t[1] ^= s_[1];
                t[2] ^= s_[2];
                t[3] ^= s_[3];
            }
            next();
        }
    }
    s_[0] = t[0];
    s_[1] = t[1];
    s_[2] = t[2];
    s_[3] = t[3];
}

double Xoshiro256pp::uniform01() {
    // (0, 1]: never returns 0, safe for log()
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
}

double Xoshiro256pp::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double u, v, r2;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        r2 = u * u + v * v;
    } while (r2 >= 1.0 || r2 == 0.0);
    const double f = std::sqrt(-2.0 * std::log(r2) / r2);
    cached_ = v * f;
    has_cached_ = true;
    return u * f;
}

double Xoshiro256pp::exponential(double rate) { return -std::log(uniform01()) / rate; }

Xoshiro256pp Xoshiro256pp::stream(std::uint64_t seed, std::uint64_t index) {
    Xoshiro256pp r(seed);
    for (std::uint64_t i = 0; i <= index; ++i) r.jump();
    return r;
}

// ---- simulator ----

double PbsConfig::fusion_probability() const {
    return params.k_f * std::sqrt(M_PI * dt_s / params.D_v);
}

void PbsConfig::validate() const {
    params.validate();
    if (dt_s <= 0 || horizon <= 0 || bin_width <= 0)
        throw std::invalid_argument("PbsConfig: dt_s, horizon, bin_width must be positive");
    if (fusion_probability() >= 1.0)
        throw StepTooLarge("PbsConfig: fusion probability k_f sqrt(pi dt_s/D_v) >= 1");
    if (realizations < 1) throw std::invalid_argument("PbsConfig: realizations >= 1");
}

namespace {

struct V3 {
    double x, y, z;
};

inline double norm2(const V3& p) { return p.x * p.x + p.y * p.y + p.z * p.z; }

// First intersection of segment a -> b with the sphere |p| = r (a outside or
// on it, b strictly inside), normalized onto the sphere.
inline V3 sphere_hit_point(const V3& a, const V3& b, double r) {
    const V3 d{b.x - a.x, b.y - a.y, b.z - a.z};
    const double A = norm2(d);
    const double B = 2.0 * (a.x * d.x + a.y * d.y + a.z * d.z);
    const double C = norm2(a) - r * r;
    const double disc = std::max(0.0, B * B - 4.0 * A * C);
    double s = (-B - std::sqrt(disc)) / (2.0 * A);
    if (s < 0.0 || s > 1.0) s = (-B + std::sqrt(disc)) / (2.0 * A);
    s = std::clamp(s, 0.0, 1.0);
    V3 h{a.x + s * d.x, a.y + s * d.y, a.z + s * d.z};
    const double n = std::sqrt(norm2(h));
    const double f = r / n;
    return {h.x * f, h.y * f, h.z * f};
}

} // namespace

PbsRecord simulate_emission(const PbsConfig& config, std::uint64_t realization_index) {
    config.validate();
    const ChannelParams& p = config.params;
    const double dt = config.dt_s;
    const long long steps_per_bin = std::max(1ll, std::llround(config.bin_width / dt));
    const double bin_w = steps_per_bin * dt;
    const std::size_t n_bins = static_cast<std::size_t>(config.horizon / bin_w + 0.5);
    const long long horizon_steps = static_cast<long long>(n_bins) * steps_per_bin;

    // receptor caps: angular radius a_i / r_T
    std::vector<V3> cap_dir;
    std::vector<double> cap_cos;
    for (const auto& r : config.layout.receptors) {
        cap_dir.push_back({r.direction.x, r.direction.y, r.direction.z});
        cap_cos.push_back(std::cos(r.radius_um / p.r_T));
    }

    const double p_mf = config.fusion_probability();
    const double sig_v = std::sqrt(2.0 * p.D_v * dt);
    const double sig_m = std::sqrt(2.0 * p.D_sigma * dt);
    const double rT2 = p.r_T * p.r_T;
    const double rR2 = p.r_R * p.r_R;
    const long long t_hat_step =
        config.nfm ? std::llround(config.nfm->t_hat / dt) : horizon_steps + 1;

    Xoshiro256pp rng = Xoshiro256pp::stream(config.seed, realization_index);

    PbsRecord rec;
    rec.bin_width = bin_w;
    rec.released.assign(n_bins + 1, 0.0);
    rec.absorbed.assign(n_bins + 1, 0.0);
    rec.degraded.assign(n_bins + 1, 0.0);
    rec.inside_rx.assign(n_bins + 1, 0.0);
    rec.still_in_tx.assign(n_bins + 1, 0.0);

    // vesicle birth times: PPP arrivals, exponential inter-arrival 1/mu
    std::vector<double> births(p.N_v);
    double t_birth = 0;
    for (int i = 0; i < p.N_v; ++i) {
        t_birth += rng.exponential(p.mu);
        births[i] = t_birth;
    }

    struct Fusion {
        long long step;
        V3 point;
    };
    std::vector<Fusion> fusions;
    fusions.reserve(p.N_v);

    for (int i = 0; i < p.N_v; ++i) {
        const long long start = static_cast<long long>(std::ceil(births[i] / dt));
        if (start > horizon_steps || start > t_hat_step) continue;  // unborn or frozen
        V3 pos{0, 0, 0};
        for (long long k = start; k < horizon_steps && k < t_hat_step; ++k) {
            V3 nxt{pos.x + sig_v * rng.normal(), pos.y + sig_v * rng.normal(),
                   pos.z + sig_v * rng.normal()};
            if (norm2(nxt) >= rT2) {
                if (rng.uniform01() <= p_mf) {
                    fusions.push_back({k + 1, sphere_hit_point(nxt, pos, p.r_T)});
                    break;
                }
                // reflected back to the step-start position
            } else {
                pos = nxt;
            }
        }
    }

    for (const auto& fu : fusions) {
        const std::size_t rbin = static_cast<std::size_t>((fu.step + steps_per_bin - 1) / steps_per_bin);
        if (rbin <= n_bins) rec.released[rbin] += p.eta;
    }

    // molecules
    const double cull2 = config.cull_radius > 0 ? config.cull_radius * config.cull_radius : 0;
    for (const auto& fu : fusions) {
        const double t_rel = fu.step * dt;
        for (int m = 0; m < p.eta; ++m) {
            const double death_t = t_rel + rng.exponential(p.k_d);
            // step index at/after which the molecule counts as degraded
            const long long death_step = static_cast<long long>(std::ceil(death_t / dt));
            V3 pos = fu.point;
            long long k = fu.step;
            while (k < horizon_steps) {
                if (k >= death_step) {
                    const std::size_t dbin =
                        std::min<std::size_t>(n_bins, static_cast<std::size_t>(
                            (death_step + steps_per_bin - 1) / steps_per_bin));
                    rec.degraded[dbin] += 1.0;
                    break;
                }
                const long long bin_end = (k / steps_per_bin + 1) * steps_per_bin;
                long long chunk = std::min(bin_end, std::min(death_step, horizon_steps)) - k;
                const double excess = std::sqrt(norm2(pos)) - p.r_T;
                bool jumped = false;
                if (config.far_field_jumps && chunk > 1 && excess > 12.0 * sig_m) {
                    const long long safe = static_cast<long long>(
                        excess * excess / (144.0 * 2.0 * p.D_sigma * dt));
                    const long long jump = std::min(chunk, safe);
                    if (jump > 1) {
                        const double sj = std::sqrt(2.0 * p.D_sigma * (jump * dt));
                        pos = {pos.x + sj * rng.normal(), pos.y + sj * rng.normal(),
                               pos.z + sj * rng.normal()};
                        k += jump;
                        jumped = true;
                    }
                }
                if (!jumped) {
                    V3 nxt{pos.x + sig_m * rng.normal(), pos.y + sig_m * rng.normal(),
                           pos.z + sig_m * rng.normal()};
                    ++k;
                    if (norm2(nxt) < rT2) {
                        const V3 hit = sphere_hit_point(pos, nxt, p.r_T);
                        bool absorbed = false;
                        for (std::size_t c = 0; c < cap_dir.size(); ++c) {
                            const double cosang =
                                (hit.x * cap_dir[c].x + hit.y * cap_dir[c].y +
                                 hit.z * cap_dir[c].z) / p.r_T;
                            if (cosang >= cap_cos[c]) {
                                absorbed = true;
                                break;
                            }
                        }
                        if (absorbed) {
                            const std::size_t abin = std::min<std::size_t>(
                                n_bins, static_cast<std::size_t>((k + steps_per_bin - 1) /
                                                                 steps_per_bin));
                            rec.absorbed[abin] += 1.0;
                            break;
                        }
                        // reflected back to the step-start position: pos unchanged
                    } else {
                        pos = nxt;
                    }
                }
                if (cull2 > 0 && norm2(pos) > cull2) break;
                if (k % steps_per_bin == 0 && k < death_step) {
                    const double dx = pos.x - p.r_0;
                    if (dx * dx + pos.y * pos.y + pos.z * pos.z <= rR2) {
                        rec.inside_rx[static_cast<std::size_t>(k / steps_per_bin)] += 1.0;
                    }
                }
            }
        }
    }

    // accumulate the event tallies and the conservation complement
    for (std::size_t b = 1; b <= n_bins; ++b) {
        rec.released[b] += rec.released[b - 1];
        rec.absorbed[b] += rec.absorbed[b - 1];
        rec.degraded[b] += rec.degraded[b - 1];
    }
    const double total = static_cast<double>(p.N_v) * p.eta;
    for (std::size_t b = 0; b <= n_bins; ++b) rec.still_in_tx[b] = total - rec.released[b];
    return rec;
}

namespace {

PbsEnsemble reduce(const std::vector<PbsRecord>& recs) {
    PbsEnsemble e;
    e.realizations = static_cast<int>(recs.size());
    const std::size_t nb = recs.front().bins();
    auto reduce_field = [&](std::vector<double> PbsRecord::* field) {
        std::vector<double> mean(nb, 0.0), se(nb, 0.0);
        for (const auto& r : recs)
            for (std::size_t b = 0; b < nb; ++b) mean[b] += (r.*field)[b];
        for (auto& v : mean) v /= recs.size();
        if (recs.size() > 1) {
            for (const auto& r : recs)
                for (std::size_t b = 0; b < nb; ++b) {
                    const double d = (r.*field)[b] - mean[b];
                    se[b] += d * d;
                }
            for (auto& v : se)
                v = std::sqrt(v / (recs.size() - 1.0) / static_cast<double>(recs.size()));
        }
        (e.mean.*field) = std::move(mean);
        (e.stderr_.*field) = std::move(se);
    };
    reduce_field(&PbsRecord::released);
    reduce_field(&PbsRecord::absorbed);
    reduce_field(&PbsRecord::degraded);
    reduce_field(&PbsRecord::inside_rx);
    reduce_field(&PbsRecord::still_in_tx);
    e.mean.bin_width = e.stderr_.bin_width = recs.front().bin_width;
    return e;
}

} // namespace

PbsEnsemble run_ensemble(const PbsConfig& config) {
    config.validate();
    if (config.realizations < 2)
        throw std::invalid_argument("run_ensemble: at least 2 realizations required");
    std::vector<PbsRecord> recs(config.realizations);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < config.realizations; ++i)
        recs[i] = simulate_emission(config, static_cast<std::uint64_t>(i));
    return reduce(recs);
}

PbsEnsemble run_ensemble_serial(const PbsConfig& config) {
    config.validate();
    if (config.realizations < 2)
        throw std::invalid_argument("run_ensemble_serial: at least 2 realizations required");
    std::vector<PbsRecord> recs(config.realizations);
    for (int i = 0; i < config.realizations; ++i)
        recs[i] = simulate_emission(config, static_cast<std::uint64_t>(i));
    return reduce(recs);
}

} // namespace mch
