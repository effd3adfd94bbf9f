#include "medvox/render.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "medvox/errors.hpp"
#include "medvox/nifti.hpp"

namespace medvox {

std::vector<std::uint8_t> RgbImage::to_ppm() const {
    const std::string head = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    std::vector<std::uint8_t> out(head.begin(), head.end());
    out.insert(out.end(), pixels.begin(), pixels.end());
    return out;
}

void write_ppm(const RgbImage &img, const std::filesystem::path &path) { write_file_bytes(path, img.to_ppm()); }

namespace {

RgbImage render(const MetaVolume &image, const MetaVolume *label, double alpha, int axis, int every) {
    if (image.spatial_rank() != 3) throw ConfigError("montage needs a volume with 3 spatial dims");
    if (axis < 0 || axis > 2) throw ConfigError("axis must be 0, 1 or 2");
    if (every < 1) throw ConfigError("every must be >= 1");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must be in [0, 1]");
    if (label && label->spatial_shape() != image.spatial_shape()) {
        throw ConfigError("image and label differ in spatial dims");
    }
    const auto d = image.dims3();
    const int r0 = axis == 0 ? 1 : 0;
    const int r1 = axis == 2 ? 1 : 2;
    const std::int64_t th = d[r0], tw = d[r1];

    std::vector<std::int64_t> slices;
    for (std::int64_t s = 0; s < d[axis]; s += every) slices.push_back(s);
    const auto n = static_cast<std::int64_t>(slices.size());
    const auto cols = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    const std::int64_t rows = (n + cols - 1) / cols;

    const auto ch = image.channel(0);
    const auto [lo_it, hi_it] = std::minmax_element(ch.begin(), ch.end());
    const double lo = *lo_it, hi = *hi_it;

    RgbImage img;
    img.width = cols * tw;
    img.height = rows * th;
    img.pixels.assign(static_cast<std::size_t>(img.width * img.height * 3), 0);
    for (std::int64_t t = 0; t < n; ++t) {
        const std::int64_t oy = (t / cols) * th, ox = (t % cols) * tw;
        for (std::int64_t y = 0; y < th; ++y) {
            for (std::int64_t x = 0; x < tw; ++x) {
                std::array<std::int64_t, 3> idx{};
                idx[axis] = slices[t];
                idx[r0] = y;
                idx[r1] = x;
                const std::int64_t at = (idx[0] * d[1] + idx[1]) * d[2] + idx[2];
                const double g = hi > lo ? 255.0 * (ch[at] - lo) / (hi - lo) : 0.0;
                double rgb[3] = {g, g, g};
                if (label && label->channel(0)[at] >= 0.5f) {
                    rgb[0] = (1.0 - alpha) * g + alpha * 255.0;
                    rgb[1] = (1.0 - alpha) * g;
                    rgb[2] = (1.0 - alpha) * g;
                }
                std::uint8_t *px = img.pixels.data() + ((oy + y) * img.width + ox + x) * 3;
                for (int k = 0; k < 3; ++k) px[k] = static_cast<std::uint8_t>(std::lround(std::clamp(rgb[k], 0.0, 255.0)));
            }
        }
    }
    return img;
}

} // namespace

RgbImage montage(const MetaVolume &v, int axis, int every) { return render(v, nullptr, 0.0, axis, every); }

RgbImage blend_montage(const MetaVolume &image, const MetaVolume &label, double alpha, int axis, int every) {
    return render(image, &label, alpha, axis, every);
}

} // namespace medvox
