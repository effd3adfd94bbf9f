#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "medvox/displacement_field.hpp"
#include "medvox/meta_volume.hpp"

namespace medvox {

// Per-class voxel counts over binarised channels (value >= 0.5 is foreground).
struct ConfusionCounts {
    std::vector<std::int64_t> tp, fp, fn;
};

ConfusionCounts confusion(const MetaVolume &pred, const MetaVolume &truth);

struct DiceResult {
    std::vector<std::optional<double>> per_class; // unset when a class is absent in both
    std::optional<double> mean;                   // mean over defined classes
};

// Channels are classes. Throws ConfigError on a shape mismatch.
DiceResult dice_metric(const MetaVolume &pred, const MetaVolume &truth);

// Running mean of Dice over every defined (item, class) pair.
class DiceMetric {
  public:
    void add(const MetaVolume &pred, const MetaVolume &truth);
    std::optional<double> aggregate() const;
    std::size_t defined_count() const { return count_; }
    void reset();

  private:
    double sum_ = 0.0;
    std::size_t count_ = 0;
};

inline constexpr double kDefaultSmooth = 1e-5;

// 1 - mean_c (2 sum p g + smooth) / (sum p + sum g + smooth).
double dice_loss(const MetaVolume &pred, const MetaVolume &truth, double smooth = kDefaultSmooth);
// Class weights 1 / (sum g_c)^2; classes absent from the truth weigh 0.
double generalized_dice_loss(const MetaVolume &pred, const MetaVolume &truth, double smooth = kDefaultSmooth);
// 1 - mean_c (2 TP + smooth) / (2 TP + 2 alpha FP + 2 beta FN + smooth);
// alpha = beta = 0.5 is exactly dice_loss.
double tversky_loss(const MetaVolume &pred, const MetaVolume &truth, double alpha, double beta,
                    double smooth = kDefaultSmooth);
// Mean over voxels and channels of -g (1-p)^gamma log p - (1-g) p^gamma log(1-p),
// p clamped to [clamp, 1 - clamp]. gamma = 0 is binary cross-entropy.
double focal_loss(const MetaVolume &pred, const MetaVolume &truth, double gamma, double clamp = 1e-7);
double mse_loss(const MetaVolume &a, const MetaVolume &b);

// Sum over components, mean over interior voxels, of the sum over ordered axis
// pairs of squared central second differences. Needs every dim >= 3.
double bending_energy(const DisplacementField &field);

using ScorePredictor = std::function<std::vector<double>(const MetaVolume &)>;

// One channel, input geometry. Each stride cell holds score(occluded) - score(image)
// for the box starting at the cell origin. Fill defaults to each channel's mean.
MetaVolume occlusion_sensitivity(const MetaVolume &image, const ScorePredictor &predictor, std::size_t class_index,
                                 const std::vector<std::int64_t> &box_size, const std::vector<std::int64_t> &stride,
                                 std::optional<double> fill = std::nullopt);

} // namespace medvox
