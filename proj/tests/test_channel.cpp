#include <doctest.h>

#include <initializer_list>

#include <cmath>
#include <random>

#include "mch/channel.hpp"
#include "oracle_quadrature.hpp"

using namespace mch;

namespace {

ChannelParams params_mu(double mu) {
    ChannelParams p;
    p.mu = mu;
    return p;
}

const EigenSpectrum& spectrum() {
    static EigenSpectrum s = solve_spectrum_auto(9.0, 30.0, 5.0);
    return s;
}

ReceptorLayout single_big() { return single_receptor_layout(0.1, 5.0, {-1, 0, 0}); }
ReceptorLayout single_small() { return single_receptor_layout(0.1 / 11.0, 5.0, {-1, 0, 0}); }

} // namespace

TEST_CASE("absorption constants and the degenerate-k_d guard") {
    ChannelParams p = params_mu(200);
    const auto c = absorption_constants(p, 1.416563438);
    CHECK(c.w == doctest::Approx(79.4 * 1.416563438 / (5.0 * (5.0 - 1.416563438))).epsilon(1e-12));
    CHECK(c.gamma == doctest::Approx(1.0 / (5.0 - 1.416563438)).epsilon(1e-12));
    CHECK(c.zeta == doctest::Approx(c.gamma * c.gamma * 79.4 - 0.8).epsilon(1e-12));
    p.k_d = 1e-13;
    CHECK_THROWS_AS(absorption_constants(p, 1.0), DegenerateKd);
}

TEST_CASE("uniform absorption H(t)") {
    const auto c_big = absorption_constants(params_mu(200), 1.416563438);
    const auto c_small = absorption_constants(params_mu(200), 0.358200674);
    CHECK(uniform_absorption(c_big, 0.0) == 0.0);
    // frozen pre-build evaluations
    CHECK(uniform_absorption(c_big, 1.0) == doctest::Approx(0.201496072).epsilon(1e-8));
    CHECK(uniform_absorption(c_small, 1.0) == doctest::Approx(0.046783725).epsilon(1e-8));
    // nondecreasing, and the t->inf value matches the closed-form limit
    double prev = 0;
    for (double t : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0}) {
        const double h = uniform_absorption(c_big, t);
        CHECK(h >= prev);
        prev = h;
    }
    CHECK(uniform_absorption(c_big, 200.0) ==
          doctest::Approx(absorbed_fraction_limit(c_big)).epsilon(1e-9));
}

TEST_CASE("harvest limits for the two single-receptor sizes") {
    const auto c_big = absorption_constants(params_mu(200), 1.416563438);
    const auto c_small = absorption_constants(params_mu(200), 0.358200674);
    CHECK(absorbed_fraction_limit(c_big) == doctest::Approx(0.2083648735).epsilon(1e-8));
    CHECK(absorbed_fraction_limit(c_small) == doctest::Approx(0.0488700771).epsilon(1e-8));
}

TEST_CASE("release rate: zero start, unit mass, continuity at tau") {
    for (double mu : {50.0, 100.0, 200.0}) {
        ChannelParams p = params_mu(mu);
        CHECK(release_rate(p, spectrum(), 0.0) == 0.0);
        GridSpec g{1e-3, p.tau() + 5.0};
        auto fc = release_rate_series(p, spectrum(), g);
        CHECK(fc.integral() == doctest::Approx(1.0).epsilon(1e-3));
        for (double v : fc.values) CHECK(v >= -1e-12);
        const double tau = p.tau();
        CHECK(release_rate(p, spectrum(), tau) ==
              doctest::Approx(release_rate(p, spectrum(), tau + 1e-9)).epsilon(1e-6));
    }
}

TEST_CASE("release rate plateau at slow generation") {
    ChannelParams p = params_mu(50);
    GridSpec g{1e-3, 4.0};
    auto fc = release_rate_series(p, spectrum(), g);
    double lo = 1e30, hi = 0;
    for (std::size_t k = 1500; k <= 3500; ++k) {
        lo = std::min(lo, fc[k]);
        hi = std::max(hi, fc[k]);
    }
    CHECK(hi / lo < 1.05);
}

TEST_CASE("release-rate derivative matches a centered difference away from tau") {
    ChannelParams p = params_mu(200);
    const double t = 0.5 * p.tau();
    const double h = 1e-5;
    const double fd = (release_rate(p, spectrum(), t + h) - release_rate(p, spectrum(), t - h)) /
                      (2.0 * h);
    const double an = release_rate_derivative(p, spectrum(), t);
    CHECK(an == doctest::Approx(fd).epsilon(1e-4));
}

TEST_CASE("release-rate derivative signs around the peak and decay to zero") {
    // f_c rises on (0, tau] and falls afterwards, so the peak sits at tau
    ChannelParams p = params_mu(200);
    const double tau = p.tau();
    CHECK(release_rate_derivative(p, spectrum(), 0.5 * tau) > 0);
    CHECK(release_rate_derivative(p, spectrum(), 1.5 * tau) < 0);
    CHECK(std::fabs(release_rate_derivative(p, spectrum(), tau + 30.0)) < 1e-12);
}

TEST_CASE("absorbed fraction: start, limit, mu independence") {
    GridSpec g{1e-3, 20.0};
    const auto layout = single_big();
    const auto c = absorption_constants(params_mu(200), capacitance(layout, 5.0).G_T);
    std::vector<double> at_horizon;
    for (double mu : {50.0, 100.0, 200.0}) {
        ChannelParams p = params_mu(mu);
        auto He = absorbed_fraction(p, spectrum(), layout, g);
        CHECK(He[0] == 0.0);
        for (std::size_t k = 1; k < He.size(); ++k) CHECK(He[k] >= He[k - 1] - 1e-12);
        at_horizon.push_back(He.values.back());
    }
    const double limit = absorbed_fraction_limit(c);
    for (double v : at_horizon) CHECK(v == doctest::Approx(limit).epsilon(1e-3));
    CHECK(std::fabs(at_horizon[0] - at_horizon[2]) < 1e-3);
    CHECK(std::fabs(at_horizon[0] - at_horizon[1]) < 1e-3);
}

TEST_CASE("absorption rate integrates to the absorbed fraction") {
    GridSpec g{1e-3, 6.0};
    ChannelParams p = params_mu(200);
    const auto layout = single_big();
    auto he = absorption_rate(p, spectrum(), layout, g);
    auto He = absorbed_fraction(p, spectrum(), layout, g);
    CHECK(he[0] == 0.0);
    CHECK(he.integral() == doctest::Approx(He.values.back()).epsilon(1e-3));
}

TEST_CASE("absorption-rate peak grows with the generation rate") {
    GridSpec g{1e-3, 6.0};
    const auto layout = fibonacci_layout(11, 0.1, 5.0);
    auto he50 = absorption_rate(params_mu(50), spectrum(), layout, g);
    auto he200 = absorption_rate(params_mu(200), spectrum(), layout, g);
    CHECK(he200.max() > he50.max());
}

TEST_CASE("point-source probability: small-t, factorization, MC oracle") {
    ChannelParams p = params_mu(200);
    CHECK(point_source_prob(20.0, p, 0.0) == 0.0);
    CHECK(point_source_prob(20.0, p, 1e-6) < 1e-12);  // starts outside the RX

    // degradation factorizes: P(t; k_d) = exp(-k_d t) P(t; 0)
    ChannelParams p0 = p;
    p0.k_d = 1e-30;  // validate() wants positive; effectively zero
    for (double t : {0.2, 1.0, 3.0}) {
        CHECK(point_source_prob(20.0, p, t) ==
              doctest::Approx(std::exp(-p.k_d * t) * point_source_prob(20.0, p0, t))
                  .epsilon(1e-10));
    }

    // frozen closed-form value at t = 1
    CHECK(point_source_prob(20.0, p, 1.0) == doctest::Approx(1.635408320e-2).epsilon(1e-8));

    // Monte Carlo free-diffusion oracle, 1e6 walkers, 3 sigma band
    std::mt19937_64 rng(20240811);
    std::normal_distribution<double> step(0.0, std::sqrt(2.0 * p.D_sigma * 1.0));
    const int n = 1000000;
    int inside = 0;
    for (int i = 0; i < n; ++i) {
        const double x = 20.0 + step(rng), y = step(rng), z = step(rng);
        if (x * x + y * y + z * z <= p.r_R * p.r_R) ++inside;
    }
    const double geo = static_cast<double>(inside) / n;
    const double mc = geo * std::exp(-p.k_d);
    const double se = std::sqrt(geo * (1.0 - geo) / n) * std::exp(-p.k_d);
    CHECK(std::fabs(point_source_prob(20.0, p, 1.0) - mc) < 3.0 * se);
}

TEST_CASE("uniform release probability: closed form vs membrane quadrature") {
    ChannelParams p = params_mu(200);
    for (double t : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        const double closed = uniform_release_prob(p, t);
        const double quad = mch_test::membrane_quadrature_Pu(p, t);
        CHECK(std::fabs(closed - quad) <= 1e-6);
    }
    CHECK(uniform_release_prob(p, 1.0) == doctest::Approx(1.605103963e-2).epsilon(1e-8));
    CHECK(uniform_release_prob(p, 0.0) == 0.0);
    CHECK(uniform_release_prob(p, 1e-6) < 1e-12);
    // same degradation factorization as P_alpha
    ChannelParams p0 = p;
    p0.k_d = 1e-30;
    for (double t : {0.3, 1.7}) {
        CHECK(uniform_release_prob(p, t) ==
              doctest::Approx(std::exp(-p.k_d * t) * uniform_release_prob(p0, t)).epsilon(1e-10));
    }
}

TEST_CASE("transparent-RX constructor check") {
    ChannelParams p = params_mu(200);
    p.r_0 = 14.0;  // r_0 - r_T = 9 <= r_R = 10
    CHECK_THROWS(uniform_release_prob(p, 1.0));
}

TEST_CASE("receptor-free signal: zero start and mu ordering of the peak") {
    GridSpec g{1e-3, 6.0};
    auto pt50 = no_receptor_prob(params_mu(50), spectrum(), g);
    auto pt200 = no_receptor_prob(params_mu(200), spectrum(), g);
    CHECK(pt50[0] == 0.0);
    CHECK(pt200.max() > pt50.max());
}

TEST_CASE("receptor loss: none layout, pointwise bound, single-receptor distance") {
    GridSpec g{1e-3, 4.0};
    ChannelParams p = params_mu(200);
    ReceptorLayout none = validate_layout(ReceptorLayout{}, p);
    auto zero = receptor_loss_prob(p, spectrum(), none, g);
    for (double v : zero.values) CHECK(v == 0.0);

    const auto layout = single_big();
    auto pr = receptor_loss_prob(p, spectrum(), layout, g);
    auto pt = no_receptor_prob(p, spectrum(), g);
    for (std::size_t k = 0; k < pr.size(); ++k) CHECK(pr[k] <= pt[k] + 1e-12);

    // the far-pole receptor sits 25 um from the RX center; the mix series is
    // its area fraction times the point-source curve at that distance
    auto mix = receptor_mix_series(p, layout, g);
    for (double t : {0.5, 1.0, 2.5}) {
        CHECK(mix.sample_at(t) ==
              doctest::Approx(0.1 * point_source_prob(25.0, p, t)).epsilon(1e-12));
    }
}

TEST_CASE("observed signal: bounds, simplifications, orderings") {
    GridSpec g{1e-3, 5.0};
    ChannelParams p = params_mu(200);
    const auto even = fibonacci_layout(11, 0.1, 5.0);
    const auto single = single_big();

    auto pt = no_receptor_prob(p, spectrum(), g);
    auto p_even = observed_prob(p, spectrum(), even, g);
    auto p_even_s = observed_prob(p, spectrum(), even, g, ObservedMode::even_simplified);
    auto p_single = observed_prob(p, spectrum(), single, g);
    auto p_single_s = observed_prob(p, spectrum(), single, g, ObservedMode::single_simplified);

    for (std::size_t k = 0; k < pt.size(); ++k) {
        CHECK(p_even[k] <= pt[k] + 1e-12);
        CHECK(p_single[k] <= pt[k] + 1e-12);
        CHECK(p_even[k] >= 0.0);
    }

    // the homogenized form tracks the general form within 2% of the peak
    const double peak = p_even.max();
    double gap = 0;
    for (std::size_t k = 0; k < p_even.size(); ++k)
        gap = std::max(gap, std::fabs(p_even[k] - p_even_s[k]));
    CHECK(gap < 0.02 * peak);

    // single receptor: the general path and the explicit single form agree
    double gap_s = 0;
    for (std::size_t k = 0; k < p_single.size(); ++k)
        gap_s = std::max(gap_s, std::fabs(p_single[k] - p_single_s[k]));
    CHECK(gap_s < 1e-12);

    // fewer absorbed molecules -> stronger signal for the single receptor
    const std::size_t kpk = p_single.argmax();
    CHECK(p_single[kpk] > p_even[kpk]);

    // conservation triangle at the horizon
    GridSpec g20{1e-3, 20.0};
    auto He = absorbed_fraction(p, spectrum(), single, g20);
    CHECK(He.values.back() <= 1.0 - p_single.max());
}

TEST_CASE("mode mismatch rejected") {
    GridSpec g{1e-3, 1.0};
    ChannelParams p = params_mu(200);
    CHECK_THROWS_AS(observed_prob(p, spectrum(), single_big(), g, ObservedMode::even_simplified),
                    ModeMismatch);
    CHECK_THROWS_AS(
        observed_prob(p, spectrum(), fibonacci_layout(4, 0.1, 5.0), g,
                      ObservedMode::single_simplified),
        ModeMismatch);
}

TEST_CASE("harvest limit ordering: even lattice beats the single receptor") {
    ChannelParams p = params_mu(200);
    const auto even = capacitance(fibonacci_layout(11, 0.1, 5.0), 5.0);
    const auto single = capacitance(single_big(), 5.0);
    const double h_even = absorbed_fraction_limit(absorption_constants(p, even.G_T));
    const double h_single = absorbed_fraction_limit(absorption_constants(p, single.G_T));
    CHECK(h_even > h_single);
}

TEST_CASE("signal-loss double convolution is grouping-insensitive") {
    // ((f_cd * H)/A) * mix  ==  (f_cd * (H * mix))/A within quadrature error
    ChannelParams p = params_mu(200);
    const auto layout = fibonacci_layout(4, 0.08, 5.0);
    GridSpec g{1e-3, 3.0};
    auto left = receptor_loss_prob(p, spectrum(), layout, g);

    const double A = layout.coverage(p.r_T);
    const auto c = absorption_constants(p, capacitance(layout, p.r_T).G_T);
    auto H = uniform_absorption_series(c, g);
    auto mix = receptor_mix_series(p, layout, g);
    auto inner = convolve(H, mix);
    auto right = convolve(release_rate_derivative_series(p, spectrum(), g), inner);
    for (auto& v : right.values) v /= A;
    const double scale = left.max();
    for (std::size_t k = 0; k < left.size(); ++k)
        CHECK(left[k] == doctest::Approx(right[k]).epsilon(5e-4).scale(scale));
}

TEST_CASE("grid refinement: halving dt moves the signal peak value < 0.5%") {
    ChannelParams p = params_mu(200);
    const auto layout = single_small();
    auto coarse = observed_prob(p, spectrum(), layout, GridSpec{1e-3, 4.0});
    auto fine = observed_prob(p, spectrum(), layout, GridSpec{5e-4, 4.0});
    CHECK(std::fabs(fine.max() - coarse.max()) / coarse.max() < 0.005);
}
