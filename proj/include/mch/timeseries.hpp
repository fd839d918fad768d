#ifndef MCH_TIMESERIES_HPP
#define MCH_TIMESERIES_HPP

#include <functional>
#include <stdexcept>
#include <vector>

#include "mch/params.hpp"

namespace mch {

// A uniformly sampled function of time, samples at t = 0, dt, 2dt, ...
struct TimeSeries {
    double dt = 0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double time_at(std::size_t k) const { return dt * static_cast<double>(k); }
    double& operator[](std::size_t k) { return values[k]; }
    double operator[](std::size_t k) const { return values[k]; }

    // nearest grid sample to time t (clamped to the grid)
    double sample_at(double t) const;
    std::size_t argmax() const;  // ties broken to the earliest grid point
    double max() const { return values[argmax()]; }

    // trapezoid integral over the whole grid
    double integral() const;
};

struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Causal discrete convolution on a shared grid via the trapezoidal rule:
//   (f*g)[k] = dt * ( f[0]g[k]/2 + sum_{j=1}^{k-1} f[j]g[k-j] + f[k]g[0]/2 ),
// (f*g)[0] = 0. Inputs must share dt and length. The parallel version splits
// the output indices across threads; each output sample is an independent
// dot product, so the result is bit-identical to the serial reference.
TimeSeries convolve(const TimeSeries& f, const TimeSeries& g);
TimeSeries convolve_serial(const TimeSeries& f, const TimeSeries& g);

// Tabulate fn over the grid (fn evaluated at t = k*dt), OpenMP across samples.
TimeSeries tabulate(const GridSpec& grid, const std::function<double(double)>& fn);
TimeSeries tabulate_serial(const GridSpec& grid, const std::function<double(double)>& fn);

} // namespace mch

#endif
