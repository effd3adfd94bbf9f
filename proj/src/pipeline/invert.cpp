#include "medvox/errors.hpp"
#include "medvox/intensity.hpp"
#include "medvox/pipeline.hpp"
#include "medvox/spatial.hpp"

namespace medvox {

namespace {

MetaVolume undo(MetaVolume v, const TraceRecord &rec, bool spatial_only) {
    if (!rec.do_transform || rec.transform_id == "OneOf") return v;
    if (is_spatial(rec.transform_id)) {
        if (!is_invertible_spatial(rec.transform_id)) {
            throw InversionError("transform '" + rec.transform_id + "' is not invertible");
        }
        return invert_spatial(v, rec);
    }
    if (spatial_only) return v;
    return invert_intensity(v, rec);
}

} // namespace

MetaVolume invert(const MetaVolume &v, const InvertOptions &opts) {
    if (v.applied.empty()) throw InversionError("cannot invert: the trace stack is empty");
    const std::size_t depth = opts.depth ? *opts.depth : v.applied.size();
    if (depth > v.applied.size()) throw InversionError("cannot invert: fewer trace records than requested");
    MetaVolume out = v;
    for (std::size_t i = 0; i < depth; ++i) {
        const TraceRecord rec = std::move(out.applied.back());
        out.applied.pop_back();
        out = undo(std::move(out), rec, opts.spatial_only);
    }
    return out;
}

Item invert(const Item &item, const InvertOptions &opts) {
    if (const auto *v = std::get_if<MetaVolume>(&item)) return invert(*v, opts);
    DataDict out;
    for (const auto &[k, v] : std::get<DataDict>(item)) out.emplace(k, invert(v, opts));
    return out;
}

} // namespace medvox
