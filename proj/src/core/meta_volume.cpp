#include "medvox/meta_volume.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "medvox/displacement_field.hpp"
#include "medvox/errors.hpp"

namespace medvox {

void MetaMap::set(std::string key, MetaValue value) {
    for (auto &e : entries_) {
        if (e.first == key) {
            e.second = std::move(value);
            return;
        }
    }
    entries_.emplace_back(std::move(key), std::move(value));
}

const MetaValue *MetaMap::find(std::string_view key) const {
    for (const auto &e : entries_) {
        if (e.first == key) return &e.second;
    }
    return nullptr;
}

bool MetaMap::erase(std::string_view key) {
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry &e) { return e.first == key; });
    if (it == entries_.end()) return false;
    entries_.erase(it);
    return true;
}

namespace {
template <class T>
const T &typed(const MetaMap &m, std::string_view key) {
    const MetaValue *v = m.find(key);
    if (v == nullptr) throw TransformError("missing key '" + std::string(key) + "'");
    const T *t = std::get_if<T>(v);
    if (t == nullptr) throw TransformError("key '" + std::string(key) + "' has the wrong type");
    return *t;
}
} // namespace

double MetaMap::number(std::string_view key) const { return typed<double>(*this, key); }
const std::string &MetaMap::string(std::string_view key) const { return typed<std::string>(*this, key); }
const std::vector<double> &MetaMap::list(std::string_view key) const {
    return typed<std::vector<double>>(*this, key);
}

std::int64_t product(std::span<const std::int64_t> dims) {
    return std::accumulate(dims.begin(), dims.end(), std::int64_t{1}, std::multiplies<>());
}

MetaVolume::MetaVolume(std::vector<std::int64_t> shape_, float fill) : shape(std::move(shape_)) {
    data.assign(static_cast<std::size_t>(product(shape)), fill);
}

std::vector<std::int64_t> MetaVolume::spatial_shape() const {
    if (shape.empty()) return {};
    return {shape.begin() + 1, shape.end()};
}

std::array<std::int64_t, 3> MetaVolume::dims3() const {
    std::array<std::int64_t, 3> d{1, 1, 1};
    for (int i = 0; i < spatial_rank() && i < 3; ++i) d[i] = shape[i + 1];
    return d;
}

std::int64_t MetaVolume::voxels_per_channel() const {
    if (shape.size() < 2) return 0;
    return product(std::span(shape).subspan(1));
}

std::span<float> MetaVolume::channel(std::int64_t c) {
    const auto n = static_cast<std::size_t>(voxels_per_channel());
    return std::span(data).subspan(static_cast<std::size_t>(c) * n, n);
}

std::span<const float> MetaVolume::channel(std::int64_t c) const {
    const auto n = static_cast<std::size_t>(voxels_per_channel());
    return std::span(data).subspan(static_cast<std::size_t>(c) * n, n);
}

void MetaVolume::validate() const {
    if (shape.size() < 2 || shape.size() > 4) {
        throw TransformError("volume must have a channel axis and 1-3 spatial axes");
    }
    for (auto d : shape) {
        if (d < 1) throw TransformError("volume dimensions must be >= 1");
    }
    if (static_cast<std::int64_t>(data.size()) != product(shape)) {
        throw TransformError("volume data length does not match its shape");
    }
    if (!affine.is_affine()) throw TransformError("affine last row must be (0,0,0,1)");
    if (std::abs(affine.det3()) < 1e-12) throw TransformError("affine direction matrix is singular");
}

MetaVolume MetaVolume::like(std::int64_t channels) const {
    MetaVolume out;
    out.shape = shape;
    out.shape[0] = channels;
    out.data.assign(static_cast<std::size_t>(product(out.shape)), 0.0f);
    out.affine = affine;
    out.meta = meta;
    out.applied = applied;
    return out;
}

Vec3 volume_to_world(const MetaVolume &v, const std::array<std::int64_t, 3> &index) {
    const auto d = v.dims3();
    for (int i = 0; i < 3; ++i) {
        if (index[i] < 0 || index[i] >= d[i]) throw TransformError("voxel index out of bounds");
    }
    return v.affine.transform_point(
        {static_cast<double>(index[0]), static_cast<double>(index[1]), static_cast<double>(index[2])});
}

Vec3 affine_spacing(const Mat4 &a) {
    Vec3 s{};
    for (int c = 0; c < 3; ++c) s[c] = std::sqrt(a(0, c) * a(0, c) + a(1, c) * a(1, c) + a(2, c) * a(2, c));
    return s;
}

DisplacementField::DisplacementField(std::vector<std::int64_t> dims_) : dims(std::move(dims_)) {
    data.assign(static_cast<std::size_t>(rank() * voxels()), 0.0);
}

std::int64_t DisplacementField::voxels() const { return product(dims); }

} // namespace medvox
