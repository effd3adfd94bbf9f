#include <algorithm>
#include <cmath>
#include <set>

#include "medvox/errors.hpp"
#include "medvox/spatial.hpp"

namespace medvox {

namespace {

constexpr char kPositive[3] = {'R', 'A', 'S'};
constexpr char kNegative[3] = {'L', 'P', 'I'};

// (world axis, sign) for a code letter.
std::pair<int, int> decode_code(char c) {
    for (int w = 0; w < 3; ++w) {
        if (c == kPositive[w]) return {w, +1};
        if (c == kNegative[w]) return {w, -1};
    }
    throw ConfigError(std::string("invalid axis code '") + c + "'");
}

Mat4 permute_flip_affine(const Mat4 &a, std::span<const int> perm, std::span<const int> flips,
                         const std::array<std::int64_t, 3> &in_dims) {
    Mat4 out = a;
    for (int r = 0; r < 3; ++r) out(r, 3) = a(r, 3);
    for (std::size_t t = 0; t < perm.size(); ++t) {
        const int src = perm[t];
        const double s = flips[t] != 0 ? -1.0 : 1.0;
        for (int r = 0; r < 3; ++r) {
            out(r, static_cast<int>(t)) = s * a(r, src);
            if (flips[t] != 0) out(r, 3) += a(r, src) * static_cast<double>(in_dims[src] - 1);
        }
    }
    return out;
}

} // namespace

namespace detail {

MetaVolume permute_flip_data(const MetaVolume &v, std::span<const int> perm, std::span<const int> flips) {
    const int rank = v.spatial_rank();
    if (static_cast<int>(perm.size()) != rank || static_cast<int>(flips.size()) != rank) {
        throw TransformError("permutation rank mismatch");
    }
    std::array<int, 3> p{0, 1, 2};
    std::array<int, 3> f{0, 0, 0};
    for (int t = 0; t < rank; ++t) {
        p[t] = perm[t];
        f[t] = flips[t];
    }
    const auto din = v.dims3();
    std::array<std::int64_t, 3> dout{};
    for (int t = 0; t < 3; ++t) dout[t] = din[p[t]];

    MetaVolume out = v;
    for (int t = 0; t < rank; ++t) out.shape[t + 1] = dout[t];
    const std::int64_t n = v.voxels_per_channel();
    std::array<std::int64_t, 3> src{};
    std::int64_t flat = 0;
    for (std::int64_t i = 0; i < dout[0]; ++i) {
        for (std::int64_t j = 0; j < dout[1]; ++j) {
            for (std::int64_t k = 0; k < dout[2]; ++k, ++flat) {
                const std::array<std::int64_t, 3> o{i, j, k};
                for (int t = 0; t < 3; ++t) src[p[t]] = f[t] != 0 ? din[p[t]] - 1 - o[t] : o[t];
                const std::int64_t s = (src[0] * din[1] + src[1]) * din[2] + src[2];
                for (std::int64_t c = 0; c < v.channels(); ++c) {
                    out.data[static_cast<std::size_t>(c * n + flat)] = v.data[static_cast<std::size_t>(c * n + s)];
                }
            }
        }
    }
    return out;
}

TraceRecord begin_record(const MetaVolume &v, std::string_view id) {
    TraceRecord rec;
    rec.transform_id = std::string(id);
    rec.do_transform = true;
    rec.orig_size = v.spatial_shape();
    rec.orig_affine = v.affine;
    return rec;
}

std::vector<double> to_list(const Mat4 &m) { return {m.m.begin(), m.m.end()}; }

Mat4 from_list(const std::vector<double> &l) {
    if (l.size() != 16) throw InversionError("matrix payload must have 16 entries");
    Mat4 m;
    std::copy(l.begin(), l.end(), m.m.begin());
    return m;
}

} // namespace detail

std::string axis_codes(const Mat4 &a) {
    if (std::abs(a.det3()) < 1e-12) throw TransformError("singular direction matrix");
    std::string codes(3, '?');
    std::set<int> used;
    for (int col = 0; col < 3; ++col) {
        int best = 0;
        for (int r = 1; r < 3; ++r) {
            if (std::abs(a(r, col)) > std::abs(a(best, col))) best = r;
        }
        if (!used.insert(best).second) {
            throw TransformError("ambiguous orientation: two voxel axes dominate the same world axis");
        }
        codes[col] = a(best, col) >= 0 ? kPositive[best] : kNegative[best];
    }
    return codes;
}

MetaVolume orientation_to(const MetaVolume &v, std::string_view codes) {
    v.validate();
    if (v.spatial_rank() != 3) throw TransformError("orientation_to needs 3 spatial dims");
    if (codes.size() != 3) throw ConfigError("axis codes must have three letters");
    std::array<std::pair<int, int>, 3> target{};
    std::set<int> worlds;
    for (int t = 0; t < 3; ++t) {
        target[t] = decode_code(codes[t]);
        if (!worlds.insert(target[t].first).second) {
            throw ConfigError("axis codes '" + std::string(codes) + "' repeat a world axis");
        }
    }
    const std::string current = axis_codes(v.affine);

    std::vector<int> perm(3), flips(3);
    for (int t = 0; t < 3; ++t) {
        for (int j = 0; j < 3; ++j) {
            const auto [w, s] = decode_code(current[j]);
            if (w == target[t].first) {
                perm[t] = j;
                flips[t] = s != target[t].second ? 1 : 0;
            }
        }
    }

    TraceRecord rec = detail::begin_record(v, spatial_id::kOrientation);
    rec.extra.set("axcodes", std::string(codes));
    rec.extra.set("perm", std::vector<double>(perm.begin(), perm.end()));
    rec.extra.set("flips", std::vector<double>(flips.begin(), flips.end()));

    MetaVolume out = detail::permute_flip_data(v, perm, flips);
    out.affine = permute_flip_affine(v.affine, perm, flips, v.dims3());
    out.applied.push_back(std::move(rec));
    return out;
}

MetaVolume flip(const MetaVolume &v, std::span<const int> axes) {
    v.validate();
    const int rank = v.spatial_rank();
    std::vector<int> perm(static_cast<std::size_t>(rank)), flips(static_cast<std::size_t>(rank), 0);
    for (int t = 0; t < rank; ++t) perm[t] = t;
    for (int a : axes) {
        if (a < 0 || a >= rank) throw TransformError("flip axis " + std::to_string(a) + " out of range");
        flips[a] = 1;
    }
    TraceRecord rec = detail::begin_record(v, spatial_id::kFlip);
    std::vector<double> ax;
    for (int t = 0; t < rank; ++t) {
        if (flips[t] != 0) ax.push_back(t);
    }
    rec.extra.set("axes", ax);

    MetaVolume out = detail::permute_flip_data(v, perm, flips);
    out.affine = permute_flip_affine(v.affine, perm, flips, v.dims3());
    out.applied.push_back(std::move(rec));
    return out;
}

} // namespace medvox
