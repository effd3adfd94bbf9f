#include "medvox/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "medvox/errors.hpp"

namespace medvox {

Mat4 Mat4::identity() { return diagonal(1.0, 1.0, 1.0, 1.0); }

Mat4 Mat4::diagonal(double a, double b, double c, double d) {
    Mat4 r;
    r(0, 0) = a;
    r(1, 1) = b;
    r(2, 2) = c;
    r(3, 3) = d;
    return r;
}

Mat4 Mat4::translation(const Vec3 &t) {
    Mat4 r = identity();
    r(0, 3) = t[0];
    r(1, 3) = t[1];
    r(2, 3) = t[2];
    return r;
}

Mat4 Mat4::operator*(const Mat4 &o) const {
    Mat4 r;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += (*this)(i, k) * o(k, j);
            r(i, j) = s;
        }
    }
    return r;
}

Vec3 Mat4::transform_point(const Vec3 &p) const {
    Vec3 r{};
    for (int i = 0; i < 3; ++i) {
        r[i] = (*this)(i, 0) * p[0] + (*this)(i, 1) * p[1] + (*this)(i, 2) * p[2] + (*this)(i, 3);
    }
    return r;
}

Vec3 Mat4::transform_vector(const Vec3 &v) const {
    Vec3 r{};
    for (int i = 0; i < 3; ++i) {
        r[i] = (*this)(i, 0) * v[0] + (*this)(i, 1) * v[1] + (*this)(i, 2) * v[2];
    }
    return r;
}

Mat4 Mat4::inverse() const {
    Mat4 a = *this;
    Mat4 inv = identity();
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r) {
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        }
        if (std::abs(a(pivot, col)) < 1e-300) throw TransformError("singular matrix");
        if (pivot != col) {
            for (int c = 0; c < 4; ++c) {
                std::swap(a(col, c), a(pivot, c));
                std::swap(inv(col, c), inv(pivot, c));
            }
        }
        const double p = a(col, col);
        for (int c = 0; c < 4; ++c) {
            a(col, c) /= p;
            inv(col, c) /= p;
        }
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const double f = a(r, col);
            if (f == 0.0) continue;
            for (int c = 0; c < 4; ++c) {
                a(r, c) -= f * a(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

double Mat4::det3() const {
    const auto &s = *this;
    return s(0, 0) * (s(1, 1) * s(2, 2) - s(1, 2) * s(2, 1)) -
           s(0, 1) * (s(1, 0) * s(2, 2) - s(1, 2) * s(2, 0)) +
           s(0, 2) * (s(1, 0) * s(2, 1) - s(1, 1) * s(2, 0));
}

bool Mat4::is_affine() const {
    return (*this)(3, 0) == 0.0 && (*this)(3, 1) == 0.0 && (*this)(3, 2) == 0.0 && (*this)(3, 3) == 1.0;
}

double max_abs_diff(const Mat4 &a, const Mat4 &b) {
    double d = 0.0;
    for (std::size_t i = 0; i < 16; ++i) d = std::max(d, std::abs(a.m[i] - b.m[i]));
    return d;
}

} // namespace medvox
