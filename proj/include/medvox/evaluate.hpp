#pragma once

#include <optional>
#include <vector>

#include "medvox/dataset.hpp"
#include "medvox/inference.hpp"
#include "medvox/metrics.hpp"

namespace medvox {

struct EvaluationResult {
    std::optional<double> mean_dice; // over defined (item, class) pairs
    std::vector<std::optional<double>> per_item;
};

// Runs the engine over `dataset` (items are {"image", "label"} dictionaries)
// with sliding-window inference as the step, accumulating Dice into `metric`.
EvaluationResult evaluate(const Dataset &dataset, const BatchPredictor &predictor, DiceMetric &metric,
                          const SlidingWindowParams &sw, std::uint64_t epoch = 0);

} // namespace medvox
