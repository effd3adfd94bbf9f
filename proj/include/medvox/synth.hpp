#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "medvox/meta_volume.hpp"
#include "medvox/rng.hpp"

namespace medvox {

struct Ellipsoid {
    std::array<double, 3> center{};
    std::array<double, 3> radii{1.0, 1.0, 1.0};

    bool contains(const std::array<double, 3> &p, int rank) const;
};

struct SynthResult {
    MetaVolume image;
    MetaVolume label;
    std::vector<Ellipsoid> objects;
};

// `num_objects` random ellipsoids of intensity 1 on a zero background plus
// N(0, noise_sigma) noise; the label is the binary mask before noise.
SynthResult synth_volume(Rng &rng, const std::vector<std::int64_t> &dims, int num_objects, double noise_sigma);

} // namespace medvox
