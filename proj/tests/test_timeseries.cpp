#include <doctest.h>

#include <initializer_list>

#include <cmath>

#include "mch/timeseries.hpp"

using namespace mch;

namespace {
TimeSeries make(double dt, std::vector<double> v) { return TimeSeries{dt, std::move(v)}; }
}

TEST_CASE("constant * constant is an exact ramp") {
    TimeSeries one = make(0.1, std::vector<double>(50, 1.0));
    auto r = convolve(one, one);
    for (std::size_t k = 0; k < r.size(); ++k)
        CHECK(r[k] == doctest::Approx(0.1 * static_cast<double>(k)).epsilon(1e-14));
}

TEST_CASE("unit quadrature mass at the origin acts as identity") {
    // under trapezoid end-weights the sample at t=0 carries weight dt/2, so
    // the discrete delta with unit mass has amplitude 2/dt
    const double dt = 0.05;
    TimeSeries g = make(dt, {});
    for (int k = 0; k < 40; ++k) g.values.push_back(std::sin(0.3 * k) + 2.0);
    TimeSeries delta = make(dt, std::vector<double>(40, 0.0));
    delta.values[0] = 2.0 / dt;
    auto r = convolve(delta, g);
    for (std::size_t k = 1; k < r.size(); ++k)
        CHECK(r[k] == doctest::Approx(g[k]).epsilon(1e-13));
    CHECK(r[0] == 0.0);
}

TEST_CASE("commutative on random-ish series") {
    TimeSeries f = make(0.01, {}), g = make(0.01, {});
    for (int k = 0; k < 200; ++k) {
        f.values.push_back(std::cos(0.11 * k) * std::exp(-0.01 * k));
        g.values.push_back(std::sin(0.07 * k + 0.5));
    }
    auto fg = convolve(f, g);
    auto gf = convolve(g, f);
    for (std::size_t k = 0; k < fg.size(); ++k)
        CHECK(fg[k] == doctest::Approx(gf[k]).epsilon(1e-12));
}

TEST_CASE("associative within quadrature tolerance") {
    // all three start at zero so the end-weights do not bite
    TimeSeries f = make(0.01, {}), g = make(0.01, {}), h = make(0.01, {});
    for (int k = 0; k < 300; ++k) {
        const double t = 0.01 * k;
        f.values.push_back(t * std::exp(-t));
        g.values.push_back(std::sin(t));
        h.values.push_back(t * t * std::exp(-2 * t));
    }
    auto left = convolve(convolve(f, g), h);
    auto right = convolve(f, convolve(g, h));
    for (std::size_t k = 0; k < left.size(); ++k)
        CHECK(left[k] == doctest::Approx(right[k]).epsilon(5e-4).scale(1.0));
}

TEST_CASE("parallel convolution equals the serial reference bit for bit") {
    TimeSeries f = make(0.002, {}), g = make(0.002, {});
    for (int k = 0; k < 1500; ++k) {
        f.values.push_back(std::exp(-0.003 * k) * std::sin(0.05 * k));
        g.values.push_back(1.0 / (1.0 + 0.01 * k));
    }
    auto a = convolve(f, g);
    auto b = convolve_serial(f, g);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == b[k]);
}

TEST_CASE("grid mismatch rejected") {
    TimeSeries f = make(0.01, std::vector<double>(10, 1.0));
    TimeSeries g = make(0.02, std::vector<double>(10, 1.0));
    CHECK_THROWS_AS(convolve(f, g), GridMismatch);
    TimeSeries h = make(0.01, std::vector<double>(11, 1.0));
    CHECK_THROWS_AS(convolve(f, h), GridMismatch);
}

TEST_CASE("tabulate parallel equals serial and integral is trapezoidal") {
    GridSpec grid{0.001, 1.0};
    auto fn = [](double t) { return std::exp(-3.0 * t); };
    auto a = tabulate(grid, fn);
    auto b = tabulate_serial(grid, fn);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == b[k]);
    CHECK(a.integral() == doctest::Approx((1.0 - std::exp(-3.0)) / 3.0).epsilon(1e-6));
}

TEST_CASE("argmax ties break to the earliest sample") {
    TimeSeries f = make(0.1, {0.0, 2.0, 1.0, 2.0, 0.5});
    CHECK(f.argmax() == 1);
    TimeSeries monotone = make(0.1, {3.0, 2.0, 1.0});
    CHECK(monotone.argmax() == 0);
}

TEST_CASE("sample_at rounds to the nearest grid point") {
    TimeSeries f = make(0.5, {10.0, 20.0, 30.0});
    CHECK(f.sample_at(0.24) == 10.0);
    CHECK(f.sample_at(0.26) == 20.0);
    CHECK(f.sample_at(99.0) == 30.0);
}
