#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "medvox/meta_volume.hpp"

namespace medvox {

struct RgbImage {
    std::int64_t width = 0;
    std::int64_t height = 0;
    std::vector<std::uint8_t> pixels; // RGB, row-major

    std::vector<std::uint8_t> to_ppm() const; // binary P6
};

// Every `every`-th slice of channel 0 along `axis`, tiled row-major into a
// ceil(sqrt(n)) column grid; unused tiles stay black. Intensities are min-max
// mapped to 8-bit gray over the whole volume.
RgbImage montage(const MetaVolume &v, int axis, int every);

// As montage, with voxels where label >= 0.5 mixed towards red by alpha.
RgbImage blend_montage(const MetaVolume &image, const MetaVolume &label, double alpha, int axis, int every);

void write_ppm(const RgbImage &img, const std::filesystem::path &path);

} // namespace medvox
