#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "medvox/meta_volume.hpp"

namespace medvox {

enum class BlendMode { Constant, Gaussian };

BlendMode parse_blend_mode(std::string_view s);
std::string_view to_string(BlendMode m);

struct WindowPlan {
    std::vector<std::int64_t> dims;
    std::vector<std::int64_t> roi; // clipped to dims
    double overlap = 0.0;
    std::vector<std::vector<std::int64_t>> starts; // per axis, ascending
    std::vector<std::vector<std::int64_t>> origins; // cartesian product, last axis fastest
};

// Per axis: interval = max(1, floor(roi * (1 - overlap))); one window when
// D <= roi, else ceil((D - roi) / interval) + 1 starts clamped to D - roi.
WindowPlan plan_windows(const std::vector<std::int64_t> &dims, const std::vector<std::int64_t> &roi, double overlap);

// Row-major over roi. Gaussian: separable, centred at (roi - 1) / 2 with
// sigma = 0.125 * roi, peak 1, floored at 1e-3.
std::vector<float> make_importance_map(const std::vector<std::int64_t> &roi, BlendMode mode);

// Maps a batch of (C, roi) windows to (C', roi) outputs; C' fixed across calls.
using BatchPredictor = std::function<std::vector<MetaVolume>(const std::vector<MetaVolume> &)>;

struct SlidingWindowParams {
    std::vector<std::int64_t> roi;
    double overlap = 0.25;
    BlendMode blend = BlendMode::Constant;
    std::size_t batch_size = 1;
};

// Weighted average of window predictions. Inputs smaller than roi are
// zero-padded at the end and cropped back (meta "sys.sliding_window.padded").
// `order` optionally permutes the window processing order.
MetaVolume sliding_window_infer(const MetaVolume &v, const SlidingWindowParams &params,
                                const BatchPredictor &predictor,
                                const std::vector<std::size_t> *order = nullptr);

} // namespace medvox
