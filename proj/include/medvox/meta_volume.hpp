#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "medvox/geometry.hpp"

namespace medvox {

using MetaValue = std::variant<double, std::string, std::vector<double>>;

// Insertion-ordered string -> value map. Keys prefixed "sys." are reserved
// for values the engine itself writes.
class MetaMap {
  public:
    using Entry = std::pair<std::string, MetaValue>;

    void set(std::string key, MetaValue value);
    const MetaValue *find(std::string_view key) const;
    bool contains(std::string_view key) const { return find(key) != nullptr; }
    bool erase(std::string_view key);

    // Typed accessors throw TransformError when the key is missing or has another type.
    double number(std::string_view key) const;
    const std::string &string(std::string_view key) const;
    const std::vector<double> &list(std::string_view key) const;

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    bool operator==(const MetaMap &) const = default;

  private:
    std::vector<Entry> entries_;
};

// One applied transform. `extra` holds whatever the inverse needs.
struct TraceRecord {
    std::string transform_id;
    bool do_transform = true;
    std::vector<std::int64_t> orig_size;
    Mat4 orig_affine = Mat4::identity();
    MetaMap extra;

    bool operator==(const TraceRecord &) const = default;
};

// Channel-first float volume: shape (C, D1[, D2[, D3]]), last axis fastest.
struct MetaVolume {
    std::vector<std::int64_t> shape;
    std::vector<float> data;
    Mat4 affine = Mat4::identity();
    MetaMap meta;
    std::vector<TraceRecord> applied;

    MetaVolume() = default;
    explicit MetaVolume(std::vector<std::int64_t> shape_, float fill = 0.0f);

    std::int64_t channels() const { return shape.empty() ? 0 : shape[0]; }
    int spatial_rank() const { return shape.empty() ? 0 : static_cast<int>(shape.size()) - 1; }
    std::vector<std::int64_t> spatial_shape() const;
    // Spatial dims padded to three with trailing 1s.
    std::array<std::int64_t, 3> dims3() const;
    std::int64_t voxels_per_channel() const;

    std::span<float> channel(std::int64_t c);
    std::span<const float> channel(std::int64_t c) const;

    // Throws TransformError when an invariant is broken.
    void validate() const;

    // Same geometry, meta and trace; data replaced by `channels` zero-filled channels.
    MetaVolume like(std::int64_t channels) const;

    bool operator==(const MetaVolume &) const = default;
};

std::int64_t product(std::span<const std::int64_t> dims);

// affine * (i, j, k, 1). Indices beyond the spatial rank must be 0.
Vec3 volume_to_world(const MetaVolume &v, const std::array<std::int64_t, 3> &index);

// Voxel spacing: column norms of the upper-left 3x3.
Vec3 affine_spacing(const Mat4 &affine);

} // namespace medvox
