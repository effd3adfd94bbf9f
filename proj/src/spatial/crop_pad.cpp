#include <cmath>

#include "medvox/errors.hpp"
#include "medvox/spatial.hpp"

namespace medvox {

namespace detail {

MetaVolume crop_pad_data(const MetaVolume &v, std::span<const std::int64_t> start, std::span<const std::int64_t> size,
                         PaddingMode pad) {
    const int rank = v.spatial_rank();
    if (static_cast<int>(start.size()) != rank || static_cast<int>(size.size()) != rank) {
        throw TransformError("crop/pad needs one start and size per spatial axis");
    }
    std::array<std::int64_t, 3> st{0, 0, 0};
    std::array<std::int64_t, 3> dout{1, 1, 1};
    for (int i = 0; i < rank; ++i) {
        if (size[i] < 1) throw TransformError("crop/pad size must be >= 1");
        st[i] = start[i];
        dout[i] = size[i];
    }
    const auto din = v.dims3();

    MetaVolume out = v;
    for (int i = 0; i < rank; ++i) out.shape[i + 1] = dout[i];
    out.data.assign(static_cast<std::size_t>(product(out.shape)), 0.0f);
    const std::int64_t n_in = v.voxels_per_channel();
    const std::int64_t n_out = out.voxels_per_channel();

    std::int64_t flat = 0;
    for (std::int64_t i = 0; i < dout[0]; ++i) {
        const std::int64_t si = pad_index(st[0] + i, din[0], pad);
        for (std::int64_t j = 0; j < dout[1]; ++j) {
            const std::int64_t sj = pad_index(st[1] + j, din[1], pad);
            for (std::int64_t k = 0; k < dout[2]; ++k, ++flat) {
                const std::int64_t sk = pad_index(st[2] + k, din[2], pad);
                if (si < 0 || sj < 0 || sk < 0) continue;
                const std::int64_t s = (si * din[1] + sj) * din[2] + sk;
                for (std::int64_t c = 0; c < v.channels(); ++c) {
                    out.data[static_cast<std::size_t>(c * n_out + flat)] =
                        v.data[static_cast<std::size_t>(c * n_in + s)];
                }
            }
        }
    }
    return out;
}

} // namespace detail

MetaVolume crop_pad(const MetaVolume &v, std::span<const std::int64_t> start, std::span<const std::int64_t> size,
                    PaddingMode pad) {
    v.validate();
    TraceRecord rec = detail::begin_record(v, spatial_id::kCropPad);
    rec.extra.set("start", std::vector<double>(start.begin(), start.end()));
    rec.extra.set("size", std::vector<double>(size.begin(), size.end()));
    rec.extra.set("pad_mode", std::string(to_string(pad)));
    // Inverting a crop cannot recover discarded voxels; they come back as zeros.
    bool lossy = false;
    const auto dims = v.spatial_shape();
    for (std::size_t i = 0; i < start.size() && i < dims.size(); ++i) {
        if (start[i] > 0 || start[i] + size[i] < dims[i]) lossy = true;
    }
    rec.extra.set("lossy", lossy ? 1.0 : 0.0);

    MetaVolume out = detail::crop_pad_data(v, start, size, pad);
    Vec3 shift{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < start.size(); ++i) shift[i] = static_cast<double>(start[i]);
    out.affine = v.affine * Mat4::translation(shift);
    out.applied.push_back(std::move(rec));
    return out;
}

MetaVolume center_crop_pad(const MetaVolume &v, std::span<const std::int64_t> size, PaddingMode pad) {
    const auto dims = v.spatial_shape();
    if (size.size() != dims.size()) throw TransformError("center crop/pad needs one size per spatial axis");
    std::vector<std::int64_t> start(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) {
        const std::int64_t diff = dims[i] - size[i];
        start[i] = diff >= 0 ? diff / 2 : -((-diff + 1) / 2);
    }
    return crop_pad(v, start, size, pad);
}

} // namespace medvox
