#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "medvox/displacement_field.hpp"
#include "medvox/meta_volume.hpp"
#include "medvox/rng.hpp"
#include "medvox/sampling.hpp"

namespace medvox {

// Transform ids pushed onto the trace stack by the spatial operations.
namespace spatial_id {
inline constexpr std::string_view kOrientation = "Orientation";
inline constexpr std::string_view kSpacing = "Spacing";
inline constexpr std::string_view kFlip = "Flip";
inline constexpr std::string_view kRotate = "Rotate";
inline constexpr std::string_view kZoom = "Zoom";
inline constexpr std::string_view kCropPad = "CropPad";
inline constexpr std::string_view kAffine = "Affine";
inline constexpr std::string_view kElastic = "RandElastic";
inline constexpr std::string_view kWarp = "Warp";
} // namespace spatial_id

// Axis codes of an affine: for each voxel axis, the world axis with the
// largest |entry| in its direction column (ties go to the lower world axis),
// signed: R/L, A/P, S/I. Throws TransformError when two voxel axes map onto
// the same world axis or the matrix is singular.
std::string axis_codes(const Mat4 &affine);

// Lossless permute/flip so that axis_codes(result.affine) == codes.
MetaVolume orientation_to(const MetaVolume &v, std::string_view codes);

// Resample to the given mm spacing (one entry per spatial axis). Output dims
// are round_half_away(old_dim * old_spacing / new_spacing), at least 1; the
// world position of voxel (0,0,0) is kept.
MetaVolume spacing_to(const MetaVolume &v, std::span<const double> new_spacing, const Interpolation &interp);

MetaVolume flip(const MetaVolume &v, std::span<const int> axes);

// Rotation about the spatial centre with output dims unchanged. 2D takes one
// angle; 3D takes up to three (about axes 0, 1, 2; applied in that order).
MetaVolume rotate(const MetaVolume &v, std::span<const double> angles, const Interpolation &interp);

// Zoom about the spatial centre with output dims unchanged.
MetaVolume zoom(const MetaVolume &v, std::span<const double> factors, const Interpolation &interp);

// Extracts [start, start + size) per axis; out-of-range voxels follow `pad`
// (Zeros = constant 0, Border = edge, Reflect).
MetaVolume crop_pad(const MetaVolume &v, std::span<const std::int64_t> start, std::span<const std::int64_t> size,
                    PaddingMode pad = PaddingMode::Zeros);

// Symmetric crop or pad to `size` (start = floor((D - size) / 2)).
MetaVolume center_crop_pad(const MetaVolume &v, std::span<const std::int64_t> size,
                           PaddingMode pad = PaddingMode::Zeros);

struct AffineParams {
    std::vector<double> rotation;    // radians, as in rotate()
    std::vector<double> scale;       // per axis, default 1
    std::vector<double> shear;       // 2D: (s01, s10); 3D: (s01, s02, s10, s12, s20, s21)
    std::vector<double> translation; // voxels, per axis
};

// Forward voxel-space matrix about the spatial centre:
// T(c) * translate * rotate * shear * scale * T(-c).
Mat4 affine_params_matrix(const AffineParams &p, const std::vector<std::int64_t> &spatial);

MetaVolume affine_resample(const MetaVolume &v, const AffineParams &params, const Interpolation &interp);

// Resample through an explicit output-to-input voxel matrix, dims unchanged.
MetaVolume affine_resample_matrix(const MetaVolume &v, const Mat4 &out_to_in, const Interpolation &interp,
                                  std::string_view transform_id);

struct ElasticParams {
    std::array<double, 2> sigma_range{5.0, 8.0};     // control-grid spacing, voxels
    std::array<double, 2> magnitude_range{1.0, 2.0}; // offset scale, voxels
    double prob = 1.0;
    double rotate_range = 0.05; // radians, each axis drawn in [-r, r]
    double scale_range = 0.05;  // each axis drawn in 1 + [-s, s]
    Interpolation interp{InterpMode::Linear, PaddingMode::Border};
};

// Every random quantity of one elastic call. Draw order: gate, sigma,
// magnitude, three angles, three scales, field seed.
struct ElasticDraw {
    bool do_transform = false;
    double sigma = 0.0;
    double magnitude = 0.0;
    std::array<double, 3> angles{};
    std::array<double, 3> scales{1.0, 1.0, 1.0};
    std::uint64_t field_seed = 0;
};

ElasticDraw draw_elastic(Rng &rng, const ElasticParams &params);
// Coarse Gaussian control grid scaled by magnitude, upsampled trilinearly.
DisplacementField elastic_field(const std::vector<std::int64_t> &spatial, const ElasticDraw &draw);
Mat4 elastic_affine_out_to_in(const std::vector<std::int64_t> &spatial, const ElasticDraw &draw);
MetaVolume apply_elastic(const MetaVolume &v, const ElasticDraw &draw, const Interpolation &interp);
MetaVolume rand_elastic_3d(const MetaVolume &v, Rng &rng, const ElasticParams &params);

// output(x) = input(x + field(x)); affine unchanged; not invertible.
MetaVolume warp(const MetaVolume &v, const DisplacementField &field, const Interpolation &interp);

// Undo one spatial record on a volume whose stack no longer holds it.
bool is_invertible_spatial(std::string_view transform_id);
bool is_spatial(std::string_view transform_id);
MetaVolume invert_spatial(const MetaVolume &v, const TraceRecord &rec);

// Data-only helpers (no trace, no affine change), shared with the inverses.
namespace detail {
// out axis t reads source axis perm[t], reversed when flips[t] != 0.
MetaVolume permute_flip_data(const MetaVolume &v, std::span<const int> perm, std::span<const int> flips);
MetaVolume crop_pad_data(const MetaVolume &v, std::span<const std::int64_t> start, std::span<const std::int64_t> size,
                         PaddingMode pad);
TraceRecord begin_record(const MetaVolume &v, std::string_view id);
std::vector<double> to_list(const Mat4 &m);
Mat4 from_list(const std::vector<double> &l);
Mat4 rotation_matrix(int rank, std::span<const double> angles);
Vec3 spatial_center(const std::vector<std::int64_t> &spatial);
} // namespace detail

} // namespace medvox
