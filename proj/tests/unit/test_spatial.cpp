#include <doctest.h>

#include <cmath>
#include <numbers>

#include "medvox/errors.hpp"
#include "medvox/pipeline.hpp"
#include "medvox/spatial.hpp"
#include "support.hpp"

using namespace medvox;

namespace {

float at(const MetaVolume &v, std::int64_t i, std::int64_t j, std::int64_t k, std::int64_t c = 0) {
    const auto d = v.dims3();
    return v.channel(c)[(i * d[1] + j) * d[2] + k];
}

Mat4 lps_affine() {
    Mat4 a = Mat4::identity();
    // Voxel axis 0 runs towards -y, axis 1 towards +z, axis 2 towards -x.
    a(0, 0) = 0;
    a(1, 0) = -2.0;
    a(1, 1) = 0;
    a(2, 1) = 1.5;
    a(2, 2) = 0;
    a(0, 2) = -1.0;
    a(0, 3) = 3;
    a(1, 3) = -4;
    a(2, 3) = 5;
    return a;
}

} // namespace

TEST_CASE("padding index rules") {
    const std::int64_t n = 4;
    // Reflect mirrors about 0 and n-1 without repeating the edge: period 2(n-1).
    const std::int64_t reflect[] = {2, 3, 2, 1, 0, 1, 2, 3, 2, 1, 0, 1};
    for (std::int64_t i = -4; i < 8; ++i) {
        CHECK(pad_index(i, n, PaddingMode::Reflect) == reflect[i + 4]);
        CHECK(pad_index(i, n, PaddingMode::Border) == std::clamp<std::int64_t>(i, 0, n - 1));
        CHECK(pad_index(i, n, PaddingMode::Zeros) == (i >= 0 && i < n ? i : -1));
    }
    CHECK(pad_index(5, 1, PaddingMode::Reflect) == 0);
}

TEST_CASE("cubic kernel is Catmull-Rom") {
    auto ref = [](double x) {
        x = std::abs(x);
        const double a = -0.5;
        if (x < 1) return (a + 2) * x * x * x - (a + 3) * x * x + 1;
        if (x < 2) return a * x * x * x - 5 * a * x * x + 8 * a * x - 4 * a;
        return 0.0;
    };
    for (double x = -2.5; x <= 2.5; x += 0.125) CHECK(cubic_kernel(x) == doctest::Approx(ref(x)).epsilon(1e-15));
    CHECK(cubic_kernel(0.5) == doctest::Approx(0.5625));
}

TEST_CASE("trilinear and tricubic sampling reproduce a linear ramp") {
    const MetaVolume v = test::ramp_volume({1, 6, 6, 6});
    const auto d = v.dims3();
    // Points whose 4-tap cubic stencil stays inside the volume.
    for (const Vec3 q : {Vec3{1.25, 1.5, 2.75}, Vec3{2.5, 2.0, 1.25}, Vec3{3.75, 3.5, 3.0}}) {
        const double expect = 0.5 * q[0] + 0.25 * q[1] + 0.125 * q[2];
        CHECK(sample(v.channel(0), d, q, {InterpMode::Linear, PaddingMode::Zeros}) == doctest::Approx(expect));
        CHECK(sample(v.channel(0), d, q, {InterpMode::Cubic, PaddingMode::Border}) == doctest::Approx(expect));
    }
    CHECK(sample(v.channel(0), d, {-3, 0, 0}, {InterpMode::Linear, PaddingMode::Zeros}) == 0.0f);
    CHECK(sample(v.channel(0), d, {2.4, 1.6, 0.5}, {InterpMode::Nearest, PaddingMode::Zeros}) == at(v, 2, 2, 1));

    MetaVolume flat({1, 5, 5});
    CHECK_THROWS_AS(rotate(flat, std::vector<double>{0.1}, {InterpMode::Cubic, PaddingMode::Zeros}), TransformError);
}

TEST_CASE("axis codes") {
    CHECK(axis_codes(Mat4::identity()) == "RAS");
    CHECK(axis_codes(Mat4::diagonal(-1, -1, 1)) == "LPS");
    CHECK(axis_codes(lps_affine()) == "PSL");
}

TEST_CASE("orientation keeps every voxel at its world position") {
    MetaVolume v = test::random_volume({1, 4, 5, 6}, 1);
    v.affine = lps_affine();
    const MetaVolume r = orientation_to(v, "RAS");
    CHECK(axis_codes(r.affine) == "RAS");
    CHECK(r.spatial_shape() == std::vector<std::int64_t>{6, 4, 5});
    const Mat4 to_in = v.affine.inverse() * r.affine;
    const auto d = r.dims3();
    for (std::int64_t i = 0; i < d[0]; ++i)
        for (std::int64_t j = 0; j < d[1]; ++j)
            for (std::int64_t k = 0; k < d[2]; ++k) {
                const Vec3 p = to_in.transform_point({double(i), double(j), double(k)});
                REQUIRE(at(r, i, j, k) == at(v, std::llround(p[0]), std::llround(p[1]), std::llround(p[2])));
            }
    const MetaVolume back = invert(r);
    CHECK(back.data == v.data);
    CHECK(back.affine == v.affine);
    CHECK(back.applied.empty());
}

TEST_CASE("flip mirrors data and moves the origin") {
    const MetaVolume v = test::random_volume({2, 3, 4, 5}, 2);
    const std::vector<int> axes{0, 2};
    const MetaVolume f = flip(v, axes);
    for (std::int64_t c = 0; c < 2; ++c)
        for (std::int64_t i = 0; i < 3; ++i)
            for (std::int64_t j = 0; j < 4; ++j)
                for (std::int64_t k = 0; k < 5; ++k) REQUIRE(at(f, i, j, k, c) == at(v, 2 - i, j, 4 - k, c));
    const Vec3 w0 = f.affine.transform_point({0, 0, 0});
    const Vec3 w1 = v.affine.transform_point({2, 0, 4});
    CHECK(w0 == w1);
    CHECK(flip(f, axes).data == v.data);
}

TEST_CASE("spacing resamples to the requested grid") {
    MetaVolume v = test::ramp_volume({1, 10, 9, 7});
    v.affine = Mat4::diagonal(2.0, 1.0, 3.0);
    v.affine(0, 3) = -5;
    const Interpolation lin{InterpMode::Linear, PaddingMode::Border};
    const MetaVolume s = spacing_to(v, std::vector<double>{1.0, 1.5, 1.0}, lin);
    // round_half_away(dim * old / new)
    CHECK(s.spatial_shape() == std::vector<std::int64_t>{20, 6, 21});
    const Vec3 sp = affine_spacing(s.affine);
    CHECK(sp[0] == doctest::Approx(1.0));
    CHECK(sp[1] == doctest::Approx(1.5));
    CHECK(sp[2] == doctest::Approx(1.0));
    CHECK(s.affine.transform_point({0, 0, 0}) == v.affine.transform_point({0, 0, 0}));
    // Interior voxels hold the ramp evaluated at the mapped input coordinate.
    CHECK(at(s, 5, 2, 9) == doctest::Approx(0.5 * 2.5 + 0.25 * 3.0 + 0.125 * 3.0));

    const MetaVolume back = invert(s);
    CHECK(back.spatial_shape() == v.spatial_shape());
    CHECK(max_abs_diff(back.affine, v.affine) <= 1e-9);
}

TEST_CASE("rotate by a quarter turn permutes a square image") {
    const MetaVolume v = test::random_volume({1, 7, 7}, 3);
    const MetaVolume r = rotate(v, std::vector<double>{std::numbers::pi / 2}, {InterpMode::Nearest, PaddingMode::Zeros});
    for (std::int64_t i = 0; i < 7; ++i)
        for (std::int64_t j = 0; j < 7; ++j) REQUIRE(r.data[(6 - j) * 7 + i] == v.data[i * 7 + j]);
    const MetaVolume back = invert(r);
    CHECK(back.data == v.data);
    CHECK(max_abs_diff(back.affine, v.affine) <= 1e-12);
}

TEST_CASE("zoom by one is the identity") {
    const MetaVolume v = test::random_volume({1, 5, 6, 7}, 4);
    const MetaVolume z = zoom(v, std::vector<double>{1.0}, {});
    CHECK(test::max_abs_diff(z.data, v.data) < 1e-6);
    const MetaVolume z2 = zoom(v, std::vector<double>{2.0}, {});
    CHECK(z2.spatial_shape() == v.spatial_shape());
    CHECK(max_abs_diff(invert(z2).affine, v.affine) <= 1e-12);
}

TEST_CASE("crop and pad") {
    const MetaVolume v = test::random_volume({1, 6, 5, 4}, 5);
    const std::vector<std::int64_t> start{-2, 1, 0}, size{9, 3, 4};
    const MetaVolume c = crop_pad(v, start, size, PaddingMode::Zeros);
    CHECK(c.spatial_shape() == size);
    for (std::int64_t i = 0; i < 9; ++i)
        for (std::int64_t j = 0; j < 3; ++j)
            for (std::int64_t k = 0; k < 4; ++k) {
                const std::int64_t si = i - 2, sj = j + 1;
                const float expect = (si >= 0 && si < 6) ? at(v, si, sj, k) : 0.0f;
                REQUIRE(at(c, i, j, k) == expect);
            }
    CHECK(c.affine.transform_point({0, 0, 0}) == v.affine.transform_point({-2, 1, 0}));

    const MetaVolume r = crop_pad(v, std::vector<std::int64_t>{-2, 0, 0}, std::vector<std::int64_t>{10, 5, 4},
                                  PaddingMode::Reflect);
    for (std::int64_t i = 0; i < 10; ++i) REQUIRE(at(r, i, 2, 1) == at(v, pad_index(i - 2, 6, PaddingMode::Reflect), 2, 1));

    const MetaVolume back = invert(c);
    CHECK(back.spatial_shape() == v.spatial_shape());
    CHECK(back.affine == v.affine);
    for (std::int64_t i = 0; i < 6; ++i)
        for (std::int64_t j = 0; j < 5; ++j)
            for (std::int64_t k = 0; k < 4; ++k) {
                const bool kept = j >= 1 && j < 4;
                REQUIRE(at(back, i, j, k) == (kept ? at(v, i, j, k) : 0.0f));
            }
}

TEST_CASE("center crop uses floor((D - S) / 2)") {
    const MetaVolume v = test::random_volume({1, 7, 4, 5}, 6);
    const MetaVolume c = center_crop_pad(v, std::vector<std::int64_t>{4, 7, 5});
    CHECK(c.applied.back().extra.list("start") == std::vector<double>{1, -2, 0});
    CHECK(at(c, 0, 2, 0) == at(v, 1, 0, 0));
    CHECK(at(c, 0, 0, 0) == 0.0f);
    const MetaVolume back = invert(c);
    CHECK(back.spatial_shape() == v.spatial_shape());
}

TEST_CASE("affine resample composes rotation, scale and translation") {
    const MetaVolume v = test::ramp_volume({1, 8, 8, 8});
    AffineParams p;
    p.translation = {1, 0, 0};
    const MetaVolume t = affine_resample(v, p, {InterpMode::Linear, PaddingMode::Border});
    // Output voxel o reads input o - 1 along axis 0.
    CHECK(at(t, 4, 3, 2) == doctest::Approx(at(v, 3, 3, 2)));
    const Mat4 m = affine_params_matrix(p, v.spatial_shape());
    CHECK(m(0, 3) == 1.0);
    CHECK(max_abs_diff(invert(t).affine, v.affine) <= 1e-12);
}

TEST_CASE("elastic deformation") {
    const MetaVolume v = test::ramp_volume({1, 12, 12, 12});
    ElasticParams p;
    Rng a(11), b(11);
    const MetaVolume x = rand_elastic_3d(v, a, p);
    const MetaVolume y = rand_elastic_3d(v, b, p);
    CHECK(x.data == y.data);
    CHECK(x.data != v.data);
    CHECK(x.affine == v.affine);
    CHECK(x.applied.back().transform_id == "RandElastic");
    CHECK_THROWS_AS(invert(x), InversionError);

    // A constant image is a fixed point with border padding.
    MetaVolume k({1, 10, 10, 10}, 3.0f);
    Rng r(5);
    const MetaVolume kk = rand_elastic_3d(k, r, p);
    for (float f : kk.data) REQUIRE(f == doctest::Approx(3.0f));

    // The gate is drawn first; a failed gate leaves data alone but records the skip.
    p.prob = 0.0;
    Rng g(1);
    const MetaVolume s = rand_elastic_3d(v, g, p);
    CHECK(s.data == v.data);
    CHECK_FALSE(s.applied.back().do_transform);
    CHECK(invert(s).data == v.data);

    // The number of draws does not depend on the gate.
    ElasticParams on, off;
    off.prob = 0.0;
    Rng r1(9), r2(9);
    draw_elastic(r1, on);
    draw_elastic(r2, off);
    CHECK(r1.state() == r2.state());
}

TEST_CASE("warp by a zero field is the identity") {
    const MetaVolume v = test::random_volume({1, 5, 6, 4}, 8);
    DisplacementField f({5, 6, 4});
    const MetaVolume w = warp(v, f, {});
    CHECK(w.data == v.data);
    f.component(0)[0] = 1.0;
    const MetaVolume w2 = warp(v, f, {InterpMode::Nearest, PaddingMode::Zeros});
    CHECK(w2.data[0] == at(v, 1, 0, 0));
}
