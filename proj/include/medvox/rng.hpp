#pragma once

#include <cstdint>
#include <initializer_list>

namespace medvox {

// SplitMix64. Identical seeds give identical streams on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next_u64();

    // (next_u64() >> 11) * 2^-53, in [0, 1).
    double uniform();
    double uniform(double lo, double hi);

    // Box-Muller on two uniforms; returns the cosine branch and keeps the
    // sine branch for the following call.
    double gaussian();
    double gaussian(double mean, double sigma) { return mean + sigma * gaussian(); }

    std::uint64_t state() const { return state_; }

  private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// One SplitMix64 output for a generator whose state is `x`.
std::uint64_t splitmix64_mix(std::uint64_t x);

// Chains splitmix64_mix over base, then each part xor-ed into the running hash.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

} // namespace medvox
