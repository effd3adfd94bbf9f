#pragma once

#include <cstdint>
#include <vector>

namespace medvox {

// Per-voxel offsets in voxel units, component-major: (S, D1..DS).
struct DisplacementField {
    std::vector<std::int64_t> dims;
    std::vector<double> data;

    DisplacementField() = default;
    explicit DisplacementField(std::vector<std::int64_t> dims_);

    int rank() const { return static_cast<int>(dims.size()); }
    std::int64_t voxels() const;
    double *component(int c) { return data.data() + c * voxels(); }
    const double *component(int c) const { return data.data() + c * voxels(); }
};

} // namespace medvox
