#include <algorithm>
#include <array>

#include "medvox/errors.hpp"
#include "medvox/inference.hpp"

namespace medvox {

namespace {

std::array<std::int64_t, 3> pad3(const std::vector<std::int64_t> &v) {
    std::array<std::int64_t, 3> out{1, 1, 1};
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    return out;
}

// Copies the box [origin, origin + size) of every channel; outside reads zero.
void copy_box(const std::vector<float> &src, std::int64_t channels, const std::array<std::int64_t, 3> &sd,
              const std::array<std::int64_t, 3> &origin, const std::array<std::int64_t, 3> &size,
              std::vector<float> &dst) {
    dst.assign(static_cast<std::size_t>(channels * size[0] * size[1] * size[2]), 0.0f);
    for (std::int64_t c = 0; c < channels; ++c) {
        for (std::int64_t i = 0; i < size[0]; ++i) {
            const std::int64_t si = origin[0] + i;
            if (si >= sd[0]) break;
            for (std::int64_t j = 0; j < size[1]; ++j) {
                const std::int64_t sj = origin[1] + j;
                if (sj >= sd[1]) break;
                const std::int64_t n = std::min(size[2], sd[2] - origin[2]);
                const float *from = src.data() + ((c * sd[0] + si) * sd[1] + sj) * sd[2] + origin[2];
                float *to = dst.data() + ((c * size[0] + i) * size[1] + j) * size[2];
                std::copy(from, from + n, to);
            }
        }
    }
}

} // namespace

MetaVolume sliding_window_infer(const MetaVolume &v, const SlidingWindowParams &params,
                                const BatchPredictor &predictor, const std::vector<std::size_t> *order) {
    v.validate();
    const auto dims = v.spatial_shape();
    if (params.roi.size() != dims.size()) throw ConfigError("roi needs one entry per spatial axis");
    if (params.batch_size < 1) throw ConfigError("batch_size must be >= 1");

    std::vector<std::int64_t> padded(dims.size()), pad_amount(dims.size());
    bool any_pad = false;
    for (std::size_t a = 0; a < dims.size(); ++a) {
        if (params.roi[a] < 1) throw ConfigError("roi entries must be >= 1");
        padded[a] = std::max(dims[a], params.roi[a]);
        pad_amount[a] = padded[a] - dims[a];
        any_pad = any_pad || pad_amount[a] > 0;
    }

    const WindowPlan plan = plan_windows(padded, params.roi, params.overlap);
    const std::vector<float> importance = make_importance_map(plan.roi, params.blend);
    const auto src_d = v.dims3();
    const auto pd = pad3(padded);
    const auto roi3 = pad3(plan.roi);
    const std::int64_t roi_vox = roi3[0] * roi3[1] * roi3[2];
    const std::int64_t pvox = pd[0] * pd[1] * pd[2];

    std::vector<std::size_t> seq(plan.origins.size());
    for (std::size_t i = 0; i < seq.size(); ++i) seq[i] = i;
    if (order != nullptr) {
        std::vector<std::size_t> check = *order;
        std::sort(check.begin(), check.end());
        if (check != seq) throw ConfigError("window order must be a permutation of the window indices");
        seq = *order;
    }

    std::vector<double> sum, weight(static_cast<std::size_t>(pvox), 0.0);
    std::int64_t out_channels = -1;
    std::vector<std::int64_t> win_shape{v.channels()};
    win_shape.insert(win_shape.end(), plan.roi.begin(), plan.roi.end());

    for (std::size_t b = 0; b < seq.size(); b += params.batch_size) {
        const std::size_t e = std::min(seq.size(), b + params.batch_size);
        std::vector<MetaVolume> batch;
        for (std::size_t w = b; w < e; ++w) {
            const auto origin = pad3(plan.origins[seq[w]]);
            MetaVolume win;
            win.shape = win_shape;
            copy_box(v.data, v.channels(), src_d, origin, roi3, win.data);
            Vec3 shift{static_cast<double>(origin[0]), static_cast<double>(origin[1]), static_cast<double>(origin[2])};
            win.affine = v.affine * Mat4::translation(shift);
            batch.push_back(std::move(win));
        }
        const std::vector<MetaVolume> preds = predictor(batch);
        if (preds.size() != batch.size()) throw TransformError("predictor returned the wrong batch size");
        for (std::size_t w = b; w < e; ++w) {
            const MetaVolume &p = preds[w - b];
            if (p.spatial_shape() != plan.roi) throw TransformError("predictor output spatial shape differs from roi");
            if (out_channels < 0) {
                out_channels = p.channels();
                if (out_channels < 1) throw TransformError("predictor returned no channels");
                sum.assign(static_cast<std::size_t>(out_channels * pvox), 0.0);
            } else if (p.channels() != out_channels) {
                throw TransformError("predictor channel count changed between windows");
            }
            if (static_cast<std::int64_t>(p.data.size()) != out_channels * roi_vox) {
                throw TransformError("predictor output data size is inconsistent");
            }
            const auto origin = pad3(plan.origins[seq[w]]);
            for (std::int64_t i = 0; i < roi3[0]; ++i) {
                for (std::int64_t j = 0; j < roi3[1]; ++j) {
                    for (std::int64_t k = 0; k < roi3[2]; ++k) {
                        const std::int64_t r = (i * roi3[1] + j) * roi3[2] + k;
                        const std::int64_t o = ((origin[0] + i) * pd[1] + origin[1] + j) * pd[2] + origin[2] + k;
                        const double wgt = importance[r];
                        weight[o] += wgt;
                        for (std::int64_t c = 0; c < out_channels; ++c) {
                            sum[c * pvox + o] += wgt * p.data[c * roi_vox + r];
                        }
                    }
                }
            }
        }
    }

    MetaVolume out = v.like(out_channels);
    for (std::int64_t c = 0; c < out_channels; ++c) {
        auto ch = out.channel(c);
        for (std::int64_t i = 0; i < src_d[0]; ++i) {
            for (std::int64_t j = 0; j < src_d[1]; ++j) {
                for (std::int64_t k = 0; k < src_d[2]; ++k) {
                    const std::int64_t o = (i * pd[1] + j) * pd[2] + k;
                    if (!(weight[o] > 0.0)) throw TransformError("sliding window left a voxel uncovered");
                    ch[(i * src_d[1] + j) * src_d[2] + k] = static_cast<float>(sum[c * pvox + o] / weight[o]);
                }
            }
        }
    }
    if (any_pad) {
        out.meta.set("sys.sliding_window.padded", std::vector<double>(pad_amount.begin(), pad_amount.end()));
    }
    return out;
}

} // namespace medvox
