#pragma once

#include <functional>

#include "medvox/pipeline.hpp"

namespace medvox {

using VolumePredictor = std::function<MetaVolume(const MetaVolume &)>;

struct TtaResult {
    MetaVolume mean;
    MetaVolume std; // population std across runs
};

// Test-time augmentation: n_runs of augment -> predict -> copy the augmented
// trace onto the prediction -> invert; then voxelwise mean and std.
TtaResult tta(const Pipeline &p, const MetaVolume &image, const VolumePredictor &predictor, int n_runs, Rng &rng);

} // namespace medvox
