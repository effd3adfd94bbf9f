#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "medvox/displacement_field.hpp"
#include "medvox/meta_volume.hpp"

namespace medvox {

enum class InterpMode { Nearest, Linear, Cubic };
enum class PaddingMode { Zeros, Border, Reflect };

struct Interpolation {
    InterpMode mode = InterpMode::Linear;
    PaddingMode padding = PaddingMode::Zeros;
};

// "nearest" | "trilinear" (alias "linear", "bilinear") | "tricubic" (alias "cubic")
InterpMode parse_interp_mode(std::string_view s);
std::string_view to_string(InterpMode m);
// "zeros" (alias "constant") | "border" (alias "edge") | "reflect"
PaddingMode parse_padding_mode(std::string_view s);
std::string_view to_string(PaddingMode m);

// Maps an integer index onto [0, n) per the padding rule; -1 means "outside,
// contributes zero" and only happens for Zeros. Reflect mirrors about 0 and
// n-1 without repeating the edge sample.
std::int64_t pad_index(std::int64_t i, std::int64_t n, PaddingMode mode);

// Catmull-Rom (a = -0.5) cubic convolution kernel.
double cubic_kernel(double x);

// Samples one channel (dims padded to three) at continuous voxel coordinate p.
float sample(std::span<const float> channel, const std::array<std::int64_t, 3> &dims, const Vec3 &p,
             const Interpolation &interp);

// Output voxel o reads input at out_to_in * o (+ field(o) when given). The
// result keeps the input's affine, meta and trace; callers update those.
MetaVolume resample(const MetaVolume &in, const std::vector<std::int64_t> &out_spatial, const Mat4 &out_to_in,
                    const DisplacementField *field, const Interpolation &interp);

} // namespace medvox
