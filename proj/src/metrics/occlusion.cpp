#include <algorithm>

#include "medvox/errors.hpp"
#include "medvox/metrics.hpp"

namespace medvox {

MetaVolume occlusion_sensitivity(const MetaVolume &image, const ScorePredictor &predictor, std::size_t class_index,
                                 const std::vector<std::int64_t> &box_size, const std::vector<std::int64_t> &stride,
                                 std::optional<double> fill) {
    const auto dims = image.spatial_shape();
    const int rank = image.spatial_rank();
    if (box_size.size() != dims.size() || stride.size() != dims.size()) {
        throw ConfigError("occlusion: box_size and stride need one entry per spatial axis");
    }
    for (int a = 0; a < rank; ++a) {
        if (box_size[a] < 1 || box_size[a] > dims[a]) throw ConfigError("occlusion: box_size must be in [1, dim]");
        if (stride[a] < 1) throw ConfigError("occlusion: stride must be >= 1");
    }

    auto score = [&](const MetaVolume &v) {
        const auto s = predictor(v);
        if (class_index >= s.size()) throw ConfigError("occlusion: class index beyond the predictor's scores");
        return s[class_index];
    };
    const double base = score(image);

    std::vector<float> fills(static_cast<std::size_t>(image.channels()));
    for (std::int64_t c = 0; c < image.channels(); ++c) {
        if (fill) {
            fills[c] = static_cast<float>(*fill);
            continue;
        }
        double m = 0.0;
        for (float x : image.channel(c)) m += x;
        fills[c] = static_cast<float>(m / static_cast<double>(image.voxels_per_channel()));
    }

    MetaVolume map = image.like(1);
    const auto d3 = image.dims3();
    std::array<std::int64_t, 3> box{1, 1, 1}, step{1, 1, 1};
    for (int a = 0; a < rank; ++a) {
        box[a] = box_size[a];
        step[a] = stride[a];
    }
    auto at = [&](std::int64_t i, std::int64_t j, std::int64_t k) { return (i * d3[1] + j) * d3[2] + k; };

    for (std::int64_t o0 = 0; o0 < d3[0]; o0 += step[0]) {
        for (std::int64_t o1 = 0; o1 < d3[1]; o1 += step[1]) {
            for (std::int64_t o2 = 0; o2 < d3[2]; o2 += step[2]) {
                MetaVolume occluded = image;
                const std::array<std::int64_t, 3> e{std::min(o0 + box[0], d3[0]), std::min(o1 + box[1], d3[1]),
                                                    std::min(o2 + box[2], d3[2])};
                for (std::int64_t c = 0; c < image.channels(); ++c) {
                    auto ch = occluded.channel(c);
                    for (std::int64_t i = o0; i < e[0]; ++i)
                        for (std::int64_t j = o1; j < e[1]; ++j)
                            for (std::int64_t k = o2; k < e[2]; ++k) ch[at(i, j, k)] = fills[c];
                }
                const auto delta = static_cast<float>(score(occluded) - base);
                auto out = map.channel(0);
                for (std::int64_t i = o0; i < std::min(o0 + step[0], d3[0]); ++i)
                    for (std::int64_t j = o1; j < std::min(o1 + step[1], d3[1]); ++j)
                        for (std::int64_t k = o2; k < std::min(o2 + step[2], d3[2]); ++k) out[at(i, j, k)] = delta;
            }
        }
    }
    return map;
}

} // namespace medvox
