#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "medvox/meta_volume.hpp"

namespace medvox {

inline constexpr std::uint8_t kMvolVersion = 1;
inline constexpr std::uint8_t kMvolDtypeF32 = 1;

// MVOL container layout (all integers and floats little-endian):
//   "MVOL" | u8 version | u8 dtype | u8 ndim | u8 0 | ndim x u64 dims
//   | 16 x f64 affine (row-major) | u32 json length | json {meta, applied}
//   | f32 data
std::vector<std::uint8_t> mvol_encode(const MetaVolume &v);
MetaVolume mvol_decode(std::span<const std::uint8_t> bytes);

// Returns the number of bytes written; throws IoError when the sink fails.
std::size_t mvol_write(const MetaVolume &v, std::ostream &sink);
MetaVolume mvol_read(std::istream &source);

} // namespace medvox
