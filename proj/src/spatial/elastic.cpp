#include <cmath>
#include <cstdio>

#include "medvox/errors.hpp"
#include "medvox/spatial.hpp"

namespace medvox {

ElasticDraw draw_elastic(Rng &rng, const ElasticParams &p) {
    ElasticDraw d;
    d.do_transform = rng.uniform() < p.prob;
    d.sigma = rng.uniform(p.sigma_range[0], p.sigma_range[1]);
    d.magnitude = rng.uniform(p.magnitude_range[0], p.magnitude_range[1]);
    for (auto &a : d.angles) a = rng.uniform(-p.rotate_range, p.rotate_range);
    for (auto &s : d.scales) s = 1.0 + rng.uniform(-p.scale_range, p.scale_range);
    d.field_seed = rng.next_u64();
    return d;
}

DisplacementField elastic_field(const std::vector<std::int64_t> &spatial, const ElasticDraw &draw) {
    const int rank = static_cast<int>(spatial.size());
    const double spacing = std::max(1.0, draw.sigma);
    std::array<std::int64_t, 3> nodes{1, 1, 1};
    std::array<std::int64_t, 3> d{1, 1, 1};
    for (int i = 0; i < rank; ++i) {
        d[i] = spatial[i];
        nodes[i] = spatial[i] == 1 ? 1 : static_cast<std::int64_t>(std::ceil((spatial[i] - 1) / spacing)) + 1;
    }
    const std::int64_t n_nodes = nodes[0] * nodes[1] * nodes[2];

    Rng rng(draw.field_seed);
    std::vector<double> grid(static_cast<std::size_t>(rank * n_nodes));
    for (auto &g : grid) g = rng.gaussian() * draw.magnitude;

    struct Lerp {
        std::int64_t i0, i1;
        double t;
    };
    auto lerp_axis = [&](std::int64_t x, int axis) {
        const double g = static_cast<double>(x) / spacing;
        std::int64_t i0 = std::min<std::int64_t>(static_cast<std::int64_t>(std::floor(g)), nodes[axis] - 1);
        const std::int64_t i1 = std::min<std::int64_t>(i0 + 1, nodes[axis] - 1);
        return Lerp{i0, i1, g - static_cast<double>(i0)};
    };

    DisplacementField field(spatial);
    std::int64_t flat = 0;
    for (std::int64_t i = 0; i < d[0]; ++i) {
        const Lerp a = lerp_axis(i, 0);
        for (std::int64_t j = 0; j < d[1]; ++j) {
            const Lerp b = lerp_axis(j, 1);
            for (std::int64_t k = 0; k < d[2]; ++k, ++flat) {
                const Lerp c = lerp_axis(k, 2);
                for (int comp = 0; comp < rank; ++comp) {
                    const double *g = grid.data() + comp * n_nodes;
                    auto at = [&](std::int64_t x, std::int64_t y, std::int64_t z) {
                        return g[(x * nodes[1] + y) * nodes[2] + z];
                    };
                    double v = 0.0;
                    for (int dx = 0; dx < 2; ++dx) {
                        const double wx = dx ? a.t : 1.0 - a.t;
                        const std::int64_t x = dx ? a.i1 : a.i0;
                        for (int dy = 0; dy < 2; ++dy) {
                            const double wy = dy ? b.t : 1.0 - b.t;
                            const std::int64_t y = dy ? b.i1 : b.i0;
                            for (int dz = 0; dz < 2; ++dz) {
                                const double wz = dz ? c.t : 1.0 - c.t;
                                v += wx * wy * wz * at(x, y, dz ? c.i1 : c.i0);
                            }
                        }
                    }
                    field.component(comp)[flat] = v;
                }
            }
        }
    }
    return field;
}

Mat4 elastic_affine_out_to_in(const std::vector<std::int64_t> &spatial, const ElasticDraw &draw) {
    const Vec3 c = detail::spatial_center(spatial);
    const Mat4 fwd = Mat4::translation(c) * detail::rotation_matrix(3, draw.angles) *
                     Mat4::diagonal(draw.scales[0], draw.scales[1], draw.scales[2]) *
                     Mat4::translation({-c[0], -c[1], -c[2]});
    return fwd.inverse();
}

MetaVolume apply_elastic(const MetaVolume &v, const ElasticDraw &draw, const Interpolation &interp) {
    v.validate();
    if (v.spatial_rank() != 3) throw TransformError("rand_elastic_3d needs 3 spatial dims");
    TraceRecord rec = detail::begin_record(v, spatial_id::kElastic);
    rec.do_transform = draw.do_transform;
    rec.extra.set("sigma", draw.sigma);
    rec.extra.set("magnitude", draw.magnitude);
    rec.extra.set("angles", std::vector<double>(draw.angles.begin(), draw.angles.end()));
    rec.extra.set("scales", std::vector<double>(draw.scales.begin(), draw.scales.end()));
    char seed_hex[17];
    std::snprintf(seed_hex, sizeof seed_hex, "%016llx", static_cast<unsigned long long>(draw.field_seed));
    rec.extra.set("field_seed", std::string(seed_hex));
    if (!draw.do_transform) {
        MetaVolume out = v;
        out.applied.push_back(std::move(rec));
        return out;
    }
    const auto dims = v.spatial_shape();
    const Mat4 out_to_in = elastic_affine_out_to_in(dims, draw);
    const DisplacementField field = elastic_field(dims, draw);
    rec.extra.set("out_to_in", detail::to_list(out_to_in));
    MetaVolume out = resample(v, dims, out_to_in, &field, interp);
    out.applied.push_back(std::move(rec));
    return out;
}

MetaVolume rand_elastic_3d(const MetaVolume &v, Rng &rng, const ElasticParams &params) {
    return apply_elastic(v, draw_elastic(rng, params), params.interp);
}

} // namespace medvox
