#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "medvox/meta_volume.hpp"
#include "medvox/rng.hpp"

namespace medvox::test {

// Temporary directory removed on destruction.
class TempDir {
  public:
    TempDir() {
        static std::atomic<int> n{0};
        path_ = std::filesystem::temp_directory_path() /
                ("medvox_test_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;

    const std::filesystem::path &path() const { return path_; }
    std::string operator/(const std::string &name) const { return (path_ / name).string(); }

  private:
    std::filesystem::path path_;
};

inline MetaVolume random_volume(std::vector<std::int64_t> shape, std::uint64_t seed, float lo = 0.0f,
                                float hi = 1.0f) {
    MetaVolume v(std::move(shape));
    Rng rng(seed);
    for (auto &x : v.data) x = static_cast<float>(rng.uniform(lo, hi));
    return v;
}

// Value at each voxel is a smooth function of its index.
inline MetaVolume ramp_volume(std::vector<std::int64_t> shape) {
    MetaVolume v(std::move(shape));
    const auto d = v.dims3();
    for (std::int64_t c = 0; c < v.channels(); ++c) {
        auto ch = v.channel(c);
        for (std::int64_t i = 0; i < d[0]; ++i)
            for (std::int64_t j = 0; j < d[1]; ++j)
                for (std::int64_t k = 0; k < d[2]; ++k)
                    ch[(i * d[1] + j) * d[2] + k] = static_cast<float>(0.5 * i + 0.25 * j + 0.125 * k + c);
    }
    return v;
}

inline double max_abs_diff(const std::vector<float> &a, const std::vector<float> &b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(static_cast<double>(a[i]) - b[i]));
    return m;
}

// Small fixed volume whose MVOL bytes are checked in under tests/golden.
inline MetaVolume golden_volume() {
    MetaVolume v({1, 2, 3, 2});
    for (std::size_t i = 0; i < v.data.size(); ++i) v.data[i] = static_cast<float>(i) * 0.5f - 1.0f;
    v.affine = Mat4::diagonal(1.5, 2.0, 2.5);
    v.affine(0, 3) = -10.0;
    v.affine(1, 3) = 4.25;
    v.meta.set("note", std::string("golden"));
    v.meta.set("sys.spacing", std::vector<double>{1.5, 2.0, 2.5});
    TraceRecord rec;
    rec.transform_id = "Flip";
    rec.orig_size = {2, 3, 2};
    rec.orig_affine = v.affine;
    rec.extra.set("axes", std::vector<double>{0});
    v.applied.push_back(rec);
    return v;
}

inline std::string hex(const std::vector<std::uint8_t> &b) {
    std::string s;
    char buf[3];
    for (std::size_t i = 0; i < b.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%02x", b[i]);
        s += buf;
        s += (i % 32 == 31) ? '\n' : ' ';
    }
    if (!s.empty() && s.back() == ' ') s.back() = '\n';
    return s;
}

} // namespace medvox::test
