#include "medvox/tta.hpp"

#include <cmath>

#include "medvox/errors.hpp"

namespace medvox {

TtaResult tta(const Pipeline &p, const MetaVolume &image, const VolumePredictor &predictor, int n_runs, Rng &rng) {
    if (n_runs < 1) throw ConfigError("tta needs n_runs >= 1");
    for (const auto &st : p.steps()) {
        if (st.transform->random() && st.transform->spatial() && !st.transform->invertible()) {
            throw InversionError("tta: augmentation '" + st.name + "' is not invertible");
        }
    }
    std::vector<std::vector<float>> runs;
    MetaVolume first;
    for (int r = 0; r < n_runs; ++r) {
        const MetaVolume aug = std::get<MetaVolume>(p.apply_seeded(Item{image}, rng.next_u64()));
        MetaVolume pred = predictor(aug);
        if (pred.spatial_shape() != aug.spatial_shape()) {
            throw TransformError("tta: predictor changed the spatial dims");
        }
        pred.affine = aug.affine;
        pred.applied = aug.applied;
        InvertOptions opts;
        opts.depth = aug.applied.size() - image.applied.size();
        opts.spatial_only = true;
        MetaVolume back = opts.depth == 0 ? pred : invert(pred, opts);
        if (r == 0) {
            first = back;
        } else if (back.shape != first.shape) {
            throw TransformError("tta: inverted predictions differ in shape");
        }
        runs.push_back(std::move(back.data));
    }
    // Two passes so identical runs give a std of exactly zero.
    TtaResult res{first, first};
    const double n = n_runs;
    for (std::size_t i = 0; i < first.data.size(); ++i) {
        double mean = 0.0;
        for (const auto &run : runs) mean += run[i];
        mean /= n;
        double var = 0.0;
        for (const auto &run : runs) var += (run[i] - mean) * (run[i] - mean);
        res.mean.data[i] = static_cast<float>(mean);
        res.std.data[i] = static_cast<float>(std::sqrt(var / n));
    }
    return res;
}

} // namespace medvox
