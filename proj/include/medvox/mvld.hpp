#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "medvox/pipeline.hpp"

namespace medvox {

// Dictionary container: "MVLD" | u16 count | count x (u32 key length | key
// | u64 blob length | MVOL blob). Entries are written in key order.
std::vector<std::uint8_t> mvld_encode(const DataDict &dict);
DataDict mvld_decode(std::span<const std::uint8_t> bytes);

} // namespace medvox
