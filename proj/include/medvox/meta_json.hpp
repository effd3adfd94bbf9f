#pragma once

#include <vector>

#include <json.hpp>

#include "medvox/meta_volume.hpp"

namespace medvox {

// Meta maps are encoded as arrays of [key, value] pairs so order survives.
nlohmann::json meta_to_json(const MetaMap &meta);
MetaMap meta_from_json(const nlohmann::json &j);

nlohmann::json trace_to_json(const TraceRecord &rec);
TraceRecord trace_from_json(const nlohmann::json &j);

nlohmann::json trace_stack_to_json(const std::vector<TraceRecord> &stack);
std::vector<TraceRecord> trace_stack_from_json(const nlohmann::json &j);

} // namespace medvox
