#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "medvox/meta_volume.hpp"

namespace medvox {

// Fields of the 348-byte NIfTI-1 header that the loader interprets.
struct NiftiHeader {
    std::array<std::int16_t, 8> dim{};
    std::int16_t datatype = 0;
    std::int16_t bitpix = 0;
    std::array<float, 8> pixdim{};
    float vox_offset = 352.0f;
    float scl_slope = 0.0f;
    float scl_inter = 0.0f;
    std::int16_t qform_code = 0;
    std::int16_t sform_code = 0;
    float quatern_b = 0.0f, quatern_c = 0.0f, quatern_d = 0.0f;
    float qoffset_x = 0.0f, qoffset_y = 0.0f, qoffset_z = 0.0f;
    std::array<float, 4> srow_x{}, srow_y{}, srow_z{};
    std::array<char, 4> magic{'n', '+', '1', '\0'};
};

namespace nifti_dtype {
inline constexpr std::int16_t kUint8 = 2;
inline constexpr std::int16_t kInt16 = 4;
inline constexpr std::int16_t kFloat32 = 16;
inline constexpr std::int16_t kFloat64 = 64;
} // namespace nifti_dtype

NiftiHeader parse_nifti_header(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_nifti_header(const NiftiHeader &h);

// Affine per NIfTI-1 precedence: sform when sform_code > 0, else qform when
// qform_code > 0, else diag(pixdim).
Mat4 nifti_affine(const NiftiHeader &h);

MetaVolume nifti_decode(std::span<const std::uint8_t> bytes, const std::string &name = {});
std::vector<std::uint8_t> nifti_encode(const MetaVolume &v);

MetaVolume nifti_load(const std::filesystem::path &path);
void nifti_save(const MetaVolume &v, const std::filesystem::path &path);

// Whole-file helpers shared by the loaders and the cache.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path &path);
void write_file_bytes(const std::filesystem::path &path, std::span<const std::uint8_t> bytes);

} // namespace medvox
