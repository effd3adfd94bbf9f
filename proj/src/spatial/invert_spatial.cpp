#include <algorithm>
#include <array>

#include "medvox/errors.hpp"
#include "medvox/spatial.hpp"

namespace medvox {

namespace {

enum class Kind { PermuteFlip, Flip, Resample, CropPad };

struct Entry {
    std::string_view id;
    Kind kind;
};

constexpr std::array<Entry, 12> kInvertible{{
    {"Orientation", Kind::PermuteFlip},
    {"Flip", Kind::Flip},
    {"RandFlip", Kind::Flip},
    {"Spacing", Kind::Resample},
    {"Rotate", Kind::Resample},
    {"RandRotate", Kind::Resample},
    {"Zoom", Kind::Resample},
    {"RandZoom", Kind::Resample},
    {"Affine", Kind::Resample},
    {"RandAffine", Kind::Resample},
    {"CropPad", Kind::CropPad},
    {"RandSpatialCrop", Kind::CropPad},
}};

const Entry *lookup(std::string_view id) {
    auto it = std::find_if(kInvertible.begin(), kInvertible.end(), [&](const Entry &e) { return e.id == id; });
    return it == kInvertible.end() ? nullptr : &*it;
}

std::vector<int> as_ints(const std::vector<double> &l) { return {l.begin(), l.end()}; }

} // namespace

bool is_invertible_spatial(std::string_view id) { return lookup(id) != nullptr; }

bool is_spatial(std::string_view id) {
    return is_invertible_spatial(id) || id == spatial_id::kElastic || id == spatial_id::kWarp;
}

MetaVolume invert_spatial(const MetaVolume &v, const TraceRecord &rec) {
    const Entry *e = lookup(rec.transform_id);
    if (e == nullptr) throw InversionError("transform '" + rec.transform_id + "' is not invertible");
    const int rank = v.spatial_rank();
    if (static_cast<int>(rec.orig_size.size()) != rank) {
        throw InversionError("trace record for '" + rec.transform_id + "' does not match the volume rank");
    }

    MetaVolume out;
    switch (e->kind) {
    case Kind::PermuteFlip: {
        const auto perm = as_ints(rec.extra.list("perm"));
        const auto flips = as_ints(rec.extra.list("flips"));
        if (static_cast<int>(perm.size()) != rank || static_cast<int>(flips.size()) != rank) {
            throw InversionError("orientation record has the wrong rank");
        }
        std::vector<int> inv_perm(perm.size()), inv_flips(perm.size());
        for (std::size_t t = 0; t < perm.size(); ++t) {
            inv_perm[static_cast<std::size_t>(perm[t])] = static_cast<int>(t);
            inv_flips[static_cast<std::size_t>(perm[t])] = flips[t];
        }
        out = detail::permute_flip_data(v, inv_perm, inv_flips);
        break;
    }
    case Kind::Flip: {
        std::vector<int> perm(static_cast<std::size_t>(rank)), flips(static_cast<std::size_t>(rank), 0);
        for (int t = 0; t < rank; ++t) perm[t] = t;
        for (double a : rec.extra.list("axes")) {
            const int ax = static_cast<int>(a);
            if (ax < 0 || ax >= rank) throw InversionError("flip record axis out of range");
            flips[ax] = 1;
        }
        out = detail::permute_flip_data(v, perm, flips);
        break;
    }
    case Kind::Resample: {
        const Mat4 m = detail::from_list(rec.extra.list("out_to_in"));
        Interpolation interp;
        interp.mode = parse_interp_mode(rec.extra.string("mode"));
        interp.padding = parse_padding_mode(rec.extra.string("padding"));
        out = resample(v, rec.orig_size, m.inverse(), nullptr, interp);
        break;
    }
    case Kind::CropPad: {
        const auto start = rec.extra.list("start");
        std::vector<std::int64_t> back(start.size());
        for (std::size_t i = 0; i < start.size(); ++i) back[i] = -static_cast<std::int64_t>(start[i]);
        out = detail::crop_pad_data(v, back, rec.orig_size, PaddingMode::Zeros);
        break;
    }
    }
    out.affine = rec.orig_affine;
    return out;
}

} // namespace medvox
