#pragma once

#include <array>
#include <cstdint>

namespace medvox {

using Vec3 = std::array<double, 3>;

// 4x4 homogeneous matrix, row-major.
struct Mat4 {
    std::array<double, 16> m{};

    static Mat4 identity();
    static Mat4 diagonal(double a, double b, double c, double d = 1.0);
    static Mat4 translation(const Vec3 &t);

    double &operator()(int r, int c) { return m[static_cast<std::size_t>(r * 4 + c)]; }
    double operator()(int r, int c) const { return m[static_cast<std::size_t>(r * 4 + c)]; }

    Mat4 operator*(const Mat4 &o) const;
    Vec3 transform_point(const Vec3 &p) const;
    Vec3 transform_vector(const Vec3 &v) const;

    // Gauss-Jordan with partial pivoting; throws TransformError when singular.
    Mat4 inverse() const;

    double det3() const;
    bool is_affine() const; // last row == (0,0,0,1)

    bool operator==(const Mat4 &) const = default;
};

double max_abs_diff(const Mat4 &a, const Mat4 &b);

} // namespace medvox
