#include "medvox/synth.hpp"

#include <algorithm>

#include "medvox/errors.hpp"

namespace medvox {

bool Ellipsoid::contains(const std::array<double, 3> &p, int rank) const {
    double s = 0.0;
    for (int i = 0; i < rank; ++i) {
        const double t = (p[i] - center[i]) / radii[i];
        s += t * t;
    }
    return s <= 1.0;
}

SynthResult synth_volume(Rng &rng, const std::vector<std::int64_t> &dims, int num_objects, double noise_sigma) {
    if (dims.empty() || dims.size() > 3) throw ConfigError("synthetic volumes need 1-3 spatial dims");
    if (num_objects < 1) throw ConfigError("num_objects must be >= 1");
    if (noise_sigma < 0) throw ConfigError("noise sigma must be >= 0");
    const std::int64_t min_dim = *std::min_element(dims.begin(), dims.end());
    if (min_dim < 8) throw ConfigError("synthetic dims must be >= 8 per axis to place an object");

    const int rank = static_cast<int>(dims.size());
    const double r_min = 2.0;
    const double r_max = std::max(r_min, static_cast<double>(min_dim) / 4.0);

    SynthResult out;
    std::vector<std::int64_t> shape{1};
    shape.insert(shape.end(), dims.begin(), dims.end());
    out.image = MetaVolume(shape);
    out.label = MetaVolume(shape);

    for (int n = 0; n < num_objects; ++n) {
        Ellipsoid e;
        for (int i = 0; i < 3; ++i) {
            // Radii and centres are always drawn for three axes.
            const double r = rng.uniform(r_min, r_max);
            const double hi = i < rank ? static_cast<double>(dims[i]) - 1.0 - r : r;
            const double c = rng.uniform(r, std::max(r, hi));
            if (i < rank) {
                e.radii[i] = r;
                e.center[i] = c;
            }
        }
        out.objects.push_back(e);
    }

    const auto d = out.label.dims3();
    std::size_t idx = 0;
    for (std::int64_t i = 0; i < d[0]; ++i) {
        for (std::int64_t j = 0; j < d[1]; ++j) {
            for (std::int64_t k = 0; k < d[2]; ++k, ++idx) {
                const std::array<double, 3> p{static_cast<double>(i), static_cast<double>(j), static_cast<double>(k)};
                const bool inside = std::any_of(out.objects.begin(), out.objects.end(),
                                                [&](const Ellipsoid &e) { return e.contains(p, rank); });
                out.label.data[idx] = inside ? 1.0f : 0.0f;
            }
        }
    }
    out.image.data = out.label.data;
    if (noise_sigma > 0.0) {
        for (auto &x : out.image.data) x = static_cast<float>(x + rng.gaussian(0.0, noise_sigma));
    }
    out.image.meta.set("sys.synthetic", 1.0);
    out.label.meta.set("sys.synthetic", 1.0);
    return out;
}

} // namespace medvox
