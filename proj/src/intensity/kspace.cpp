#include "medvox/kspace.hpp"

#include <algorithm>
#include <cmath>

#include "medvox/dft.hpp"
#include "medvox/errors.hpp"
#include "medvox/intensity.hpp"

namespace medvox {

SpikeDraw draw_kspace_spike(Rng &rng, const SpikeParams &p) {
    if (!(p.gain_range[0] > 0.0) || p.gain_range[1] < p.gain_range[0]) {
        throw TransformError("spike gain range must be positive and ordered");
    }
    if (p.count < 1) throw TransformError("spike count must be >= 1");
    SpikeDraw d;
    d.do_transform = rng.uniform() < p.prob;
    d.gain = rng.uniform(p.gain_range[0], p.gain_range[1]);
    for (int i = 0; i < p.count; ++i) d.location_u.push_back(rng.uniform());
    return d;
}

std::vector<std::int64_t> spike_bins(const SpikeDraw &draw, const std::vector<std::int64_t> &dims) {
    std::int64_t n = 1;
    for (auto d : dims) n *= d;
    std::vector<std::int64_t> out;
    if (n < 2) return out;
    for (double u : draw.location_u) {
        const auto k = 1 + static_cast<std::int64_t>(u * static_cast<double>(n - 1));
        out.push_back(std::min(k, n - 1));
    }
    return out;
}

void spike_kspace(ComplexVolume &k, std::span<const std::int64_t> bins, double gain) {
    double max_mag = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) max_mag = std::max(max_mag, std::hypot(k.re[i], k.im[i]));
    const double level = gain * max_mag;
    for (auto b : bins) {
        const auto bi = static_cast<std::size_t>(b);
        const auto mirror = static_cast<std::size_t>(conjugate_bin(b, k.dims));
        if (mirror == bi) {
            // Self-conjugate bin: the value must stay real.
            k.re[bi] = k.re[bi] < 0.0 ? -level : level;
            k.im[bi] = 0.0;
        } else {
            const double phase = std::atan2(k.im[bi], k.re[bi]);
            k.re[bi] = level * std::cos(phase);
            k.im[bi] = level * std::sin(phase);
            k.re[mirror] = k.re[bi];
            k.im[mirror] = -k.im[bi];
        }
    }
}

MetaVolume apply_kspace_spike(const MetaVolume &v, const SpikeDraw &draw) {
    v.validate();
    MetaVolume out = v;
    const auto dims = v.spatial_shape();
    const auto bins = spike_bins(draw, dims);

    if (draw.do_transform) {
        for (std::int64_t c = 0; c < v.channels(); ++c) {
            ComplexVolume k = dft3(v.channel(c), dims);
            spike_kspace(k, bins, draw.gain);
            const auto x = idft3(k);
            auto dst = out.channel(c);
            for (std::size_t i = 0; i < x.size(); ++i) dst[i] = static_cast<float>(x[i]);
        }
    }

    TraceRecord rec;
    rec.transform_id = std::string(intensity_id::kKSpaceSpike);
    rec.do_transform = draw.do_transform;
    rec.orig_size = dims;
    rec.orig_affine = v.affine;
    rec.extra.set("locations", std::vector<double>(bins.begin(), bins.end()));
    rec.extra.set("gain", draw.gain);
    out.applied.push_back(std::move(rec));
    return out;
}

MetaVolume rand_kspace_spike(const MetaVolume &v, Rng &rng, const SpikeParams &params) {
    return apply_kspace_spike(v, draw_kspace_spike(rng, params));
}

} // namespace medvox
