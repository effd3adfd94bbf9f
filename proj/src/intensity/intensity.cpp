#include "medvox/intensity.hpp"

#include <algorithm>
#include <cmath>

#include "medvox/errors.hpp"

namespace medvox {

namespace {

TraceRecord make_record(const MetaVolume &v, std::string_view id) {
    TraceRecord rec;
    rec.transform_id = std::string(id);
    rec.orig_size = v.spatial_shape();
    rec.orig_affine = v.affine;
    return rec;
}

} // namespace

MetaVolume normalize_intensity(const MetaVolume &v, bool nonzero_only) {
    v.validate();
    MetaVolume out = v;
    std::vector<double> means, stds;
    for (std::int64_t c = 0; c < v.channels(); ++c) {
        const auto in = v.channel(c);
        double sum = 0.0;
        std::int64_t n = 0;
        for (float x : in) {
            if (nonzero_only && x == 0.0f) continue;
            sum += x;
            ++n;
        }
        if (n == 0) throw TransformError("normalize_intensity: channel " + std::to_string(c) + " has no nonzero voxels");
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (float x : in) {
            if (nonzero_only && x == 0.0f) continue;
            ss += (x - mean) * (x - mean);
        }
        const double sd = std::sqrt(ss / static_cast<double>(n));
        auto dst = out.channel(c);
        for (std::size_t i = 0; i < in.size(); ++i) {
            if (nonzero_only && in[i] == 0.0f) continue;
            dst[i] = sd > 0.0 ? static_cast<float>((in[i] - mean) / sd) : 0.0f;
        }
        means.push_back(mean);
        stds.push_back(sd);
    }
    TraceRecord rec = make_record(v, intensity_id::kNormalize);
    rec.extra.set("mean", means);
    rec.extra.set("std", stds);
    rec.extra.set("nonzero", nonzero_only ? 1.0 : 0.0);
    out.applied.push_back(std::move(rec));
    return out;
}

MetaVolume scale_intensity_range(const MetaVolume &v, double in_min, double in_max, double out_min, double out_max,
                                 bool clip) {
    v.validate();
    if (!(in_max > in_min)) throw TransformError("scale_intensity_range: input range is degenerate");
    MetaVolume out = v;
    const double lo = std::min(out_min, out_max), hi = std::max(out_min, out_max);
    for (auto &x : out.data) {
        double y = (x - in_min) / (in_max - in_min) * (out_max - out_min) + out_min;
        if (clip) y = std::clamp(y, lo, hi);
        x = static_cast<float>(y);
    }
    TraceRecord rec = make_record(v, intensity_id::kScaleRange);
    rec.extra.set("in", std::vector<double>{in_min, in_max});
    rec.extra.set("out", std::vector<double>{out_min, out_max});
    rec.extra.set("clip", clip ? 1.0 : 0.0);
    out.applied.push_back(std::move(rec));
    return out;
}

NoiseDraw draw_gaussian_noise(Rng &rng, double prob) {
    NoiseDraw d;
    d.do_transform = rng.uniform() < prob;
    d.seed = rng.next_u64();
    return d;
}

MetaVolume apply_gaussian_noise(const MetaVolume &v, const NoiseDraw &draw, double mean, double sigma) {
    v.validate();
    if (sigma < 0.0) throw TransformError("noise sigma must be >= 0");
    MetaVolume out = v;
    if (draw.do_transform) {
        Rng rng(draw.seed);
        for (auto &x : out.data) x = static_cast<float>(x + rng.gaussian(mean, sigma));
    }
    TraceRecord rec = make_record(v, intensity_id::kGaussianNoise);
    rec.do_transform = draw.do_transform;
    rec.extra.set("mean", mean);
    rec.extra.set("std", sigma);
    out.applied.push_back(std::move(rec));
    return out;
}

MetaVolume rand_gaussian_noise(const MetaVolume &v, Rng &rng, double mean, double sigma, double prob) {
    return apply_gaussian_noise(v, draw_gaussian_noise(rng, prob), mean, sigma);
}

bool can_invert_intensity(const TraceRecord &rec) {
    if (rec.transform_id == intensity_id::kNormalize) {
        const MetaValue *nz = rec.extra.find("nonzero");
        return nz != nullptr && std::get_if<double>(nz) != nullptr && std::get<double>(*nz) == 0.0;
    }
    if (rec.transform_id == intensity_id::kScaleRange) {
        const MetaValue *clip = rec.extra.find("clip");
        const MetaValue *out = rec.extra.find("out");
        if (clip == nullptr || out == nullptr) return false;
        const auto *o = std::get_if<std::vector<double>>(out);
        return std::get<double>(*clip) == 0.0 && o != nullptr && o->size() == 2 && (*o)[0] != (*o)[1];
    }
    return false;
}

MetaVolume invert_intensity(const MetaVolume &v, const TraceRecord &rec) {
    if (!can_invert_intensity(rec)) throw InversionError("transform '" + rec.transform_id + "' is not invertible");
    MetaVolume out = v;
    if (rec.transform_id == intensity_id::kNormalize) {
        const auto &means = rec.extra.list("mean");
        const auto &stds = rec.extra.list("std");
        if (static_cast<std::int64_t>(means.size()) != v.channels() || stds.size() != means.size()) {
            throw InversionError("NormalizeIntensity record does not match the channel count");
        }
        for (std::int64_t c = 0; c < v.channels(); ++c) {
            for (auto &x : out.channel(c)) x = static_cast<float>(x * stds[c] + means[c]);
        }
    } else {
        const auto &in = rec.extra.list("in");
        const auto &o = rec.extra.list("out");
        for (auto &x : out.data) {
            x = static_cast<float>((x - o[0]) / (o[1] - o[0]) * (in[1] - in[0]) + in[0]);
        }
    }
    return out;
}

} // namespace medvox
