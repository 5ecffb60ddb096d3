#ifndef UNICORN_RNG_HPP
#define UNICORN_RNG_HPP

#include <cstdint>

namespace unicorn {

/// xoshiro256++ with splitmix64 seeding. Every draw is a pure function of
/// the state, so identical seeds give bit-identical streams on any platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform on (0, 1).
    double uniform();

    /// Standard normal (Marsaglia polar, one cached deviate).
    double normal();

    /// Independent child stream; advancing one never affects the other.
    Rng split();

  private:
    std::uint64_t state_[4];
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

} // namespace unicorn

#endif
