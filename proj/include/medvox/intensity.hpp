#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "medvox/meta_volume.hpp"
#include "medvox/rng.hpp"

namespace medvox {

namespace intensity_id {
inline constexpr std::string_view kNormalize = "NormalizeIntensity";
inline constexpr std::string_view kScaleRange = "ScaleIntensityRange";
inline constexpr std::string_view kGaussianNoise = "RandGaussianNoise";
inline constexpr std::string_view kKSpaceSpike = "RandKSpaceSpike";
} // namespace intensity_id

// Per channel (x - mean) / std with the population std, over all voxels or
// only the nonzero ones (zeros then stay zero). A channel with std 0 becomes 0.
MetaVolume normalize_intensity(const MetaVolume &v, bool nonzero_only = false);

MetaVolume scale_intensity_range(const MetaVolume &v, double in_min, double in_max, double out_min, double out_max,
                                 bool clip);

struct NoiseDraw {
    bool do_transform = false;
    std::uint64_t seed = 0;
};

// Draw order: gate, then the per-voxel noise seed.
NoiseDraw draw_gaussian_noise(Rng &rng, double prob);
MetaVolume apply_gaussian_noise(const MetaVolume &v, const NoiseDraw &draw, double mean, double sigma);
MetaVolume rand_gaussian_noise(const MetaVolume &v, Rng &rng, double mean, double sigma, double prob);

// Invertible records: NormalizeIntensity over all voxels, ScaleIntensityRange without clipping.
bool can_invert_intensity(const TraceRecord &rec);
MetaVolume invert_intensity(const MetaVolume &v, const TraceRecord &rec);

} // namespace medvox
