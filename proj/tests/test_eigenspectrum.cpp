#include <doctest.h>

#include <initializer_list>

#include <cmath>

#include "mch/eigenspectrum.hpp"
#include "mch/special.hpp"

using namespace mch;

namespace {
constexpr double kDv = 9.0, kKf = 30.0, kRt = 5.0;

// independent oracle: exhaustive fine-grid scan (step 1e-6) plus bisection
// on the boundary function, no reuse of the solver's scanning logic
double lambda1_oracle() {
    auto g = [](double lam) {
        const double z = lam * kRt;
        return kDv * lam * sphere_j0_prime(z) + kKf * sphere_j0(z);
    };
    double a = 1e-6;
    double ga = g(a);
    for (double b = a + 1e-6; b < 2.0; b += 1e-6) {
        const double gb = g(b);
        if (ga * gb < 0) {
            double lo = a, hi = b, glo = ga;
            for (int i = 0; i < 100; ++i) {
                const double m = 0.5 * (lo + hi), gm = g(m);
                if (glo * gm <= 0) hi = m;
                else { lo = m; glo = gm; }
            }
            return 0.5 * (lo + hi);
        }
        a = b;
        ga = gb;
    }
    return -1;
}
} // namespace

TEST_CASE("first root matches the fine-grid oracle") {
    const auto spec = solve_spectrum(kDv, kKf, kRt, 4);
    const double l1 = lambda1_oracle();
    CHECK(l1 > 0);
    CHECK(spec.lambdas[0] == doctest::Approx(l1).epsilon(1e-10));
    // frozen from the pre-build oracle run
    CHECK(spec.lambdas[0] == doctest::Approx(0.591031241868).epsilon(1e-9));
}

TEST_CASE("residuals satisfy the solver contract") {
    const auto spec = solve_spectrum(kDv, kKf, kRt, 200);
    for (double r : spec.residuals) CHECK(std::fabs(r) < 1e-9 * kKf);
}

TEST_CASE("roots strictly increasing with bounded spacing") {
    const auto spec = solve_spectrum(kDv, kKf, kRt, 200);
    for (std::size_t n = 1; n < spec.size(); ++n) {
        CHECK(spec.lambdas[n] > spec.lambdas[n - 1]);
        CHECK(spec.lambdas[n] - spec.lambdas[n - 1] < 2.0 * M_PI / kRt);
    }
}

TEST_CASE("weight-sum identity: accelerated estimate hits the target") {
    const auto spec = solve_spectrum(kDv, kKf, kRt, 100);
    CHECK(spec.weight_sum_target() == doctest::Approx(0.003));
    CHECK(spec.identity_residual() < 1e-9);
    // raw partial sums are nowhere near converged at this depth
    CHECK(std::fabs(spec.weight_sum() / 0.003 - 1.0) > 1e-3);
    // first term alone differs from the target by a factor ~2
    CHECK(std::fabs(spec.weight_sum(1) / 0.003 - 1.0) > 0.5);
}

TEST_CASE("raw partial-sum error shrinks when depth doubles") {
    const auto spec = solve_spectrum(kDv, kKf, kRt, 800);
    double prev = 1e30;
    for (std::size_t n : {100, 200, 400, 800}) {
        const double err = std::fabs(spec.weight_sum(n) - 0.003);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("auto-sizing meets the convergence target") {
    const auto spec = solve_spectrum_auto(kDv, kKf, kRt);
    CHECK(spec.identity_residual() < 1e-6);
    CHECK(spec.size() >= 100);
}

TEST_CASE("spectrum is deterministic") {
    const auto a = solve_spectrum(kDv, kKf, kRt, 64);
    const auto b = solve_spectrum(kDv, kKf, kRt, 64);
    for (std::size_t n = 0; n < a.size(); ++n) {
        CHECK(a.lambdas[n] == b.lambdas[n]);  // bit-identical
        CHECK(a.weights[n] == b.weights[n]);
    }
}

TEST_CASE("solver rejects nonsense") {
    CHECK_THROWS(solve_spectrum(-1.0, kKf, kRt, 4));
    CHECK_THROWS(solve_spectrum(kDv, kKf, kRt, 0));
}
