#include <mutex>
#include <random>

#include "medvox/pipeline.hpp"

namespace medvox {

namespace {

std::optional<std::uint64_t> g_seed;

std::uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

} // namespace

void set_determinism(std::optional<std::uint64_t> seed) { g_seed = seed; }

std::optional<std::uint64_t> determinism_seed() { return g_seed; }

std::uint64_t default_pipeline_seed() { return g_seed ? splitmix64_mix(*g_seed) : entropy_seed(); }

} // namespace medvox
