#include "medvox/meta_json.hpp"

#include "medvox/errors.hpp"

namespace medvox {

using nlohmann::json;

namespace {

json value_to_json(const MetaValue &v) {
    return std::visit([](const auto &x) { return json(x); }, v);
}

MetaValue value_from_json(const json &j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number()) return j.get<double>();
    if (j.is_array()) {
        std::vector<double> out;
        out.reserve(j.size());
        for (const auto &e : j) {
            if (!e.is_number()) throw FormatError(FormatErrc::Malformed, "meta list entries must be numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }
    throw FormatError(FormatErrc::Malformed, "unsupported meta value type");
}

} // namespace

json meta_to_json(const MetaMap &meta) {
    json arr = json::array();
    for (const auto &[k, v] : meta) arr.push_back(json::array({k, value_to_json(v)}));
    return arr;
}

MetaMap meta_from_json(const json &j) {
    if (!j.is_array()) throw FormatError(FormatErrc::Malformed, "meta must be an array of pairs");
    MetaMap m;
    for (const auto &pair : j) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string()) {
            throw FormatError(FormatErrc::Malformed, "meta entries must be [key, value] pairs");
        }
        m.set(pair[0].get<std::string>(), value_from_json(pair[1]));
    }
    return m;
}

json trace_to_json(const TraceRecord &rec) {
    json j;
    j["id"] = rec.transform_id;
    j["do_transform"] = rec.do_transform;
    j["orig_size"] = rec.orig_size;
    j["orig_affine"] = rec.orig_affine.m;
    j["extra"] = meta_to_json(rec.extra);
    return j;
}

TraceRecord trace_from_json(const json &j) {
    try {
        TraceRecord rec;
        rec.transform_id = j.at("id").get<std::string>();
        rec.do_transform = j.at("do_transform").get<bool>();
        rec.orig_size = j.at("orig_size").get<std::vector<std::int64_t>>();
        const auto aff = j.at("orig_affine").get<std::vector<double>>();
        if (aff.size() != 16) throw FormatError(FormatErrc::Malformed, "orig_affine must have 16 entries");
        std::copy(aff.begin(), aff.end(), rec.orig_affine.m.begin());
        rec.extra = meta_from_json(j.at("extra"));
        return rec;
    } catch (const json::exception &e) {
        throw FormatError(FormatErrc::Malformed, std::string("bad trace record: ") + e.what());
    }
}

json trace_stack_to_json(const std::vector<TraceRecord> &stack) {
    json arr = json::array();
    for (const auto &r : stack) arr.push_back(trace_to_json(r));
    return arr;
}

std::vector<TraceRecord> trace_stack_from_json(const json &j) {
    if (!j.is_array()) throw FormatError(FormatErrc::Malformed, "trace stack must be an array");
    std::vector<TraceRecord> out;
    out.reserve(j.size());
    for (const auto &r : j) out.push_back(trace_from_json(r));
    return out;
}

} // namespace medvox
