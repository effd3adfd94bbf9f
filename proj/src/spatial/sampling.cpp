#include "medvox/sampling.hpp"

#include <cmath>

#include "medvox/errors.hpp"

namespace medvox {

InterpMode parse_interp_mode(std::string_view s) {
    if (s == "nearest") return InterpMode::Nearest;
    if (s == "trilinear" || s == "linear" || s == "bilinear") return InterpMode::Linear;
    if (s == "tricubic" || s == "cubic") return InterpMode::Cubic;
    throw ConfigError("unknown interpolation mode '" + std::string(s) + "'");
}

std::string_view to_string(InterpMode m) {
    switch (m) {
    case InterpMode::Nearest: return "nearest";
    case InterpMode::Linear: return "trilinear";
    case InterpMode::Cubic: return "tricubic";
    }
    return "?";
}

PaddingMode parse_padding_mode(std::string_view s) {
    if (s == "zeros" || s == "constant") return PaddingMode::Zeros;
    if (s == "border" || s == "edge") return PaddingMode::Border;
    if (s == "reflect") return PaddingMode::Reflect;
    throw ConfigError("unknown padding mode '" + std::string(s) + "'");
}

std::string_view to_string(PaddingMode m) {
    switch (m) {
    case PaddingMode::Zeros: return "zeros";
    case PaddingMode::Border: return "border";
    case PaddingMode::Reflect: return "reflect";
    }
    return "?";
}

std::int64_t pad_index(std::int64_t i, std::int64_t n, PaddingMode mode) {
    if (i >= 0 && i < n) return i;
    switch (mode) {
    case PaddingMode::Zeros: return -1;
    case PaddingMode::Border: return i < 0 ? 0 : n - 1;
    case PaddingMode::Reflect: {
        if (n == 1) return 0;
        const std::int64_t period = 2 * (n - 1);
        std::int64_t r = i % period;
        if (r < 0) r += period;
        return r < n ? r : period - r;
    }
    }
    return -1;
}

double cubic_kernel(double x) {
    constexpr double a = -0.5;
    x = std::abs(x);
    if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
    if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
    return 0.0;
}

namespace {

struct Taps {
    int n = 0;
    std::array<std::int64_t, 4> idx{};
    std::array<double, 4> w{};
};

Taps axis_taps(double x, std::int64_t size, const Interpolation &interp) {
    Taps t;
    switch (interp.mode) {
    case InterpMode::Nearest: {
        t.n = 1;
        t.idx[0] = pad_index(static_cast<std::int64_t>(std::llround(x)), size, interp.padding);
        t.w[0] = 1.0;
        break;
    }
    case InterpMode::Linear: {
        const double f = std::floor(x);
        const double frac = x - f;
        const auto i0 = static_cast<std::int64_t>(f);
        t.n = 2;
        t.idx[0] = pad_index(i0, size, interp.padding);
        t.idx[1] = pad_index(i0 + 1, size, interp.padding);
        t.w[0] = 1.0 - frac;
        t.w[1] = frac;
        break;
    }
    case InterpMode::Cubic: {
        const double f = std::floor(x);
        const double frac = x - f;
        const auto i0 = static_cast<std::int64_t>(f);
        t.n = 4;
        for (int k = 0; k < 4; ++k) {
            t.idx[k] = pad_index(i0 - 1 + k, size, interp.padding);
            t.w[k] = cubic_kernel(frac - static_cast<double>(k - 1));
        }
        break;
    }
    }
    return t;
}

} // namespace

float sample(std::span<const float> ch, const std::array<std::int64_t, 3> &d, const Vec3 &p,
             const Interpolation &interp) {
    const Taps a = axis_taps(p[0], d[0], interp);
    const Taps b = axis_taps(p[1], d[1], interp);
    const Taps c = axis_taps(p[2], d[2], interp);
    double acc = 0.0;
    for (int x = 0; x < a.n; ++x) {
        if (a.idx[x] < 0 || a.w[x] == 0.0) continue;
        for (int y = 0; y < b.n; ++y) {
            if (b.idx[y] < 0 || b.w[y] == 0.0) continue;
            const double wxy = a.w[x] * b.w[y];
            const std::int64_t base = (a.idx[x] * d[1] + b.idx[y]) * d[2];
            for (int z = 0; z < c.n; ++z) {
                if (c.idx[z] < 0 || c.w[z] == 0.0) continue;
                acc += wxy * c.w[z] * static_cast<double>(ch[static_cast<std::size_t>(base + c.idx[z])]);
            }
        }
    }
    return static_cast<float>(acc);
}

MetaVolume resample(const MetaVolume &in, const std::vector<std::int64_t> &out_spatial, const Mat4 &out_to_in,
                    const DisplacementField *field, const Interpolation &interp) {
    const int rank = in.spatial_rank();
    if (static_cast<int>(out_spatial.size()) != rank) throw TransformError("resample: rank mismatch");
    if (interp.mode == InterpMode::Cubic && rank != 3) {
        throw TransformError("tricubic interpolation needs 3 spatial dims");
    }
    if (field != nullptr && field->dims != out_spatial) {
        throw TransformError("displacement field shape does not match the output grid");
    }

    MetaVolume out = in;
    out.shape.resize(1);
    out.shape.insert(out.shape.end(), out_spatial.begin(), out_spatial.end());
    out.data.assign(static_cast<std::size_t>(product(out.shape)), 0.0f);

    const auto din = in.dims3();
    const auto dout = out.dims3();
    const std::int64_t n_out = out.voxels_per_channel();
    const std::int64_t channels = in.channels();

    std::int64_t flat = 0;
    for (std::int64_t i = 0; i < dout[0]; ++i) {
        for (std::int64_t j = 0; j < dout[1]; ++j) {
            for (std::int64_t k = 0; k < dout[2]; ++k, ++flat) {
                Vec3 p = out_to_in.transform_point(
                    {static_cast<double>(i), static_cast<double>(j), static_cast<double>(k)});
                if (field != nullptr) {
                    for (int c = 0; c < rank; ++c) p[c] += field->component(c)[flat];
                }
                for (std::int64_t ch = 0; ch < channels; ++ch) {
                    out.data[static_cast<std::size_t>(ch * n_out + flat)] = sample(in.channel(ch), din, p, interp);
                }
            }
        }
    }
    return out;
}

} // namespace medvox
