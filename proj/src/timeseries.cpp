#include "mch/timeseries.hpp"

#include <algorithm>
#include <cmath>

namespace mch {

double TimeSeries::sample_at(double t) const {
    if (values.empty()) throw std::out_of_range("TimeSeries::sample_at on empty series");
    long long k = std::llround(t / dt);
    if (k < 0) k = 0;
    if (k >= static_cast<long long>(values.size())) k = static_cast<long long>(values.size()) - 1;
    return values[static_cast<std::size_t>(k)];
}

std::size_t TimeSeries::argmax() const {
    std::size_t best = 0;
    for (std::size_t k = 1; k < values.size(); ++k)
        if (values[k] > values[best]) best = k;
    return best;
}

double TimeSeries::integral() const {
    if (values.size() < 2) return 0.0;
    double s = 0.5 * (values.front() + values.back());
    for (std::size_t k = 1; k + 1 < values.size(); ++k) s += values[k];
    return s * dt;
}

namespace {

void check_grids(const TimeSeries& f, const TimeSeries& g) {
    if (f.values.size() != g.values.size() || std::fabs(f.dt - g.dt) > 1e-15 * f.dt)
        throw GridMismatch("convolve: series must share dt and length");
}

inline double conv_at(const std::vector<double>& f, const std::vector<double>& g, double dt,
                      std::size_t k) {
    if (k == 0) return 0.0;
    double s = 0.5 * (f[0] * g[k] + f[k] * g[0]);
    for (std::size_t j = 1; j < k; ++j) s += f[j] * g[k - j];
    return s * dt;
}

} // namespace

TimeSeries convolve_serial(const TimeSeries& f, const TimeSeries& g) {
    check_grids(f, g);
    TimeSeries out{f.dt, std::vector<double>(f.values.size())};
    for (std::size_t k = 0; k < out.values.size(); ++k)
        out.values[k] = conv_at(f.values, g.values, f.dt, k);
    return out;
}

TimeSeries convolve(const TimeSeries& f, const TimeSeries& g) {
    check_grids(f, g);
    const long long n = static_cast<long long>(f.values.size());
    TimeSeries out{f.dt, std::vector<double>(f.values.size())};
    // skip the zero head/tail of the (possibly truncated) shorter support
    long long last_f = n - 1;
    while (last_f >= 0 && f.values[static_cast<std::size_t>(last_f)] == 0.0) --last_f;
    // interleaved chunks: the dot products grow with k, a block split would
    // put all the long ones on the last thread
#pragma omp parallel for schedule(static, 256)
    for (long long k = 0; k < n; ++k) {
        if (k == 0) {
            out.values[0] = 0.0;
            continue;
        }
        const std::size_t ku = static_cast<std::size_t>(k);
        double s = 0.5 * (f.values[0] * g.values[ku] + f.values[ku] * g.values[0]);
        const long long jmax = std::min<long long>(k - 1, last_f);
        for (long long j = 1; j <= jmax; ++j)
            s += f.values[static_cast<std::size_t>(j)] * g.values[static_cast<std::size_t>(k - j)];
        out.values[ku] = s * f.dt;
    }
    return out;
}

TimeSeries tabulate_serial(const GridSpec& grid, const std::function<double(double)>& fn) {
    grid.validate();
    TimeSeries out{grid.dt, std::vector<double>(grid.samples())};
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = fn(grid.dt * k);
    return out;
}

TimeSeries tabulate(const GridSpec& grid, const std::function<double(double)>& fn) {
    grid.validate();
    TimeSeries out{grid.dt, std::vector<double>(grid.samples())};
    const long long n = static_cast<long long>(out.values.size());
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < n; ++k)
        out.values[static_cast<std::size_t>(k)] = fn(grid.dt * k);
    return out;
}

} // namespace mch
