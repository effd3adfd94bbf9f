#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "medvox/dft.hpp"
#include "medvox/meta_volume.hpp"
#include "medvox/rng.hpp"

namespace medvox {

struct SpikeParams {
    std::array<double, 2> gain_range{0.5, 1.0};
    double prob = 1.0;
    int count = 1;
};

// Draw order: gate, gain, then one location draw per spike.
struct SpikeDraw {
    bool do_transform = false;
    double gain = 0.0;
    std::vector<double> location_u;
};

SpikeDraw draw_kspace_spike(Rng &rng, const SpikeParams &params);

// k-space bins (never the zero-frequency bin) hit by a draw on these dims.
std::vector<std::int64_t> spike_bins(const SpikeDraw &draw, const std::vector<std::int64_t> &dims);

// K[b] = gain * max|K| * exp(i * arg K[b]) for each bin b, with the conjugate
// partner set to the conjugate. Every other bin is left untouched.
void spike_kspace(ComplexVolume &k, std::span<const std::int64_t> bins, double gain);

// Per channel: K = dft3(x); K[loc] = gain * max|K| * exp(i * arg K[loc]); the
// conjugate bin gets the conjugate so the inverse stays real.
MetaVolume apply_kspace_spike(const MetaVolume &v, const SpikeDraw &draw);
MetaVolume rand_kspace_spike(const MetaVolume &v, Rng &rng, const SpikeParams &params);

} // namespace medvox
