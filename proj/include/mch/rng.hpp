#ifndef MCH_RNG_HPP
#define MCH_RNG_HPP

#include <cstdint>

// xoshiro256++ with splitmix64 seeding and the published jump() polynomial.
// Per-realization streams are obtained by jumping the master state, which
// advances it 2^128 steps per call.

namespace mch {

class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed);

    std::uint64_t next();
    void jump();

    // uniform in (0, 1]
    double uniform01();
    // standard normal (polar method, one value cached)
    double normal();
    // exponential with the given rate
    double exponential(double rate);

    // stream for realization `index`: master state jumped index+1 times
    static Xoshiro256pp stream(std::uint64_t seed, std::uint64_t index);

private:
    std::uint64_t s_[4];
    bool has_cached_ = false;
    double cached_ = 0.0;
};

} // namespace mch

#endif
