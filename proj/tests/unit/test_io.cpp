#include <doctest.h>

#include <cmath>
#include <cstring>

#include "medvox/byte_io.hpp"
#include "medvox/errors.hpp"
#include "medvox/nifti.hpp"
#include "medvox/synth.hpp"
#include "support.hpp"

using namespace medvox;

namespace {

// Hand-assembled NIfTI-1 file (offsets from the NIfTI-1 header layout).
struct RawNifti {
    std::vector<std::uint8_t> b = std::vector<std::uint8_t>(352, 0);

    template <class T>
    void put(std::size_t off, T v) {
        std::memcpy(b.data() + off, &v, sizeof v);
    }

    RawNifti(std::vector<std::int16_t> dims, std::int16_t datatype, std::int16_t bitpix) {
        put<std::int32_t>(0, 348);
        put<std::int16_t>(40, static_cast<std::int16_t>(dims.size()));
        for (std::size_t i = 0; i < dims.size(); ++i) put<std::int16_t>(42 + 2 * i, dims[i]);
        put<std::int16_t>(70, datatype);
        put<std::int16_t>(72, bitpix);
        for (int i = 0; i < 8; ++i) put<float>(76 + 4 * i, 1.0f);
        put<float>(108, 352.0f);
        std::memcpy(b.data() + 344, "n+1\0", 4);
    }
};

} // namespace

TEST_CASE("int16 data is read in Fortran order and scaled") {
    RawNifti r({3, 2, 2}, nifti_dtype::kInt16, 16);
    r.put<float>(112, 2.0f);
    r.put<float>(116, 1.0f);
    // File value at (i, j, k) = i + 10 j + 100 k, i fastest.
    for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 3; ++i) bytes::put_le<std::int16_t>(r.b, static_cast<std::int16_t>(i + 10 * j + 100 * k));
    const MetaVolume v = nifti_decode(r.b, "x.nii");
    CHECK(v.shape == std::vector<std::int64_t>{1, 3, 2, 2});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) CHECK(v.data[(i * 2 + j) * 2 + k] == 2.0f * (i + 10 * j + 100 * k) + 1.0f);
    CHECK(v.meta.number("sys.original_datatype") == nifti_dtype::kInt16);
    CHECK(v.meta.string("sys.filename") == "x.nii");
}

TEST_CASE("slope 0 means no scaling") {
    RawNifti r({2, 1, 1}, nifti_dtype::kUint8, 8);
    r.b.push_back(7);
    r.b.push_back(250);
    const MetaVolume v = nifti_decode(r.b);
    CHECK(v.data == std::vector<float>{7.0f, 250.0f});
}

TEST_CASE("affine precedence: sform, then qform, then pixdim") {
    RawNifti r({2, 2, 2}, nifti_dtype::kFloat32, 32);
    r.put<float>(80, 2.0f);
    r.put<float>(84, 3.0f);
    r.put<float>(88, 4.0f);
    r.b.resize(352 + 8 * 4, 0);

    CHECK(max_abs_diff(nifti_decode(r.b).affine, Mat4::diagonal(2, 3, 4)) < 1e-12);

    // qform: 90 degrees about z is (b, c, d) = (0, 0, sin 45).
    RawNifti q = r;
    q.put<std::int16_t>(252, 1);
    q.put<float>(264, static_cast<float>(std::sqrt(0.5)));
    q.put<float>(268, 5.0f);
    q.put<float>(272, 6.0f);
    q.put<float>(276, 7.0f);
    Mat4 expect = Mat4::identity();
    expect(0, 0) = 0;
    expect(0, 1) = -3;
    expect(1, 0) = 2;
    expect(1, 1) = 0;
    expect(2, 2) = 4;
    expect(0, 3) = 5;
    expect(1, 3) = 6;
    expect(2, 3) = 7;
    CHECK(max_abs_diff(nifti_decode(q.b).affine, expect) < 1e-6);

    // qfac = -1 flips the third column.
    RawNifti qf = q;
    qf.put<float>(76, -1.0f);
    expect(2, 2) = -4;
    CHECK(max_abs_diff(nifti_decode(qf.b).affine, expect) < 1e-6);

    RawNifti s = q;
    s.put<std::int16_t>(254, 2);
    const float rows[3][4] = {{-1, 0, 0, 10}, {0, 0, 2, 20}, {0, 3, 0, 30}};
    for (int rr = 0; rr < 3; ++rr)
        for (int c = 0; c < 4; ++c) s.put<float>(280 + 16 * rr + 4 * c, rows[rr][c]);
    const Mat4 a = nifti_decode(s.b).affine;
    for (int rr = 0; rr < 3; ++rr)
        for (int c = 0; c < 4; ++c) CHECK(a(rr, c) == rows[rr][c]);
}

TEST_CASE("round trip through encode and decode") {
    MetaVolume v = test::random_volume({1, 5, 4, 3}, 3, -100, 100);
    v.affine = Mat4::diagonal(0.9, -1.2, 2.5);
    v.affine(0, 3) = 12.5;
    v.affine(0, 1) = 0.3;
    const MetaVolume back = nifti_decode(nifti_encode(v));
    CHECK(back.shape == v.shape);
    CHECK(back.data == v.data);
    CHECK(max_abs_diff(back.affine, v.affine) <= 1e-5);

    test::TempDir dir;
    nifti_save(v, dir / "a.nii");
    CHECK(nifti_load(dir / "a.nii").data == v.data);
}

TEST_CASE("multi-channel volumes use the fifth dim") {
    MetaVolume v = test::random_volume({3, 4, 5, 2}, 4);
    const auto bytes = nifti_encode(v);
    const NiftiHeader h = parse_nifti_header(bytes);
    CHECK(h.dim[0] == 4);
    CHECK(h.dim[4] == 3);
    const MetaVolume back = nifti_decode(bytes);
    CHECK(back.shape == v.shape);
    CHECK(back.data == v.data);

    // 2D multi-channel input is saved with a unit third axis.
    MetaVolume flat = test::random_volume({2, 4, 5}, 5);
    const MetaVolume f = nifti_decode(nifti_encode(flat));
    CHECK(f.shape == std::vector<std::int64_t>{2, 4, 5, 1});
    CHECK(f.data == flat.data);
}

TEST_CASE("decode errors") {
    auto code = [](const std::vector<std::uint8_t> &b) {
        try {
            nifti_decode(b);
        } catch (const FormatError &e) {
            return e.code();
        }
        FAIL("no error");
        return FormatErrc::Malformed;
    };
    RawNifti r({2, 2, 2}, nifti_dtype::kFloat32, 32);
    auto good = r.b;
    good.resize(352 + 32, 0);
    CHECK_NOTHROW(nifti_decode(good));

    CHECK(code({0x1f, 0x8b, 0, 0}) == FormatErrc::CompressedNifti);
    auto bad = good;
    bad[345] = 'i';
    CHECK(code(bad) == FormatErrc::BadMagic);
    bad = good;
    bad.resize(352 + 31);
    CHECK(code(bad) == FormatErrc::Truncated);
    bad = good;
    bad[70] = 32; // complex64
    CHECK(code(bad) == FormatErrc::UnsupportedDtype);
    CHECK(code(std::vector<std::uint8_t>(100, 0)) == FormatErrc::Truncated);

    test::TempDir dir;
    try {
        nifti_load(dir / "missing.nii");
        FAIL("expected IoError");
    } catch (const IoError &e) {
        CHECK(std::string(e.what()).find("missing.nii") != std::string::npos);
    }
}

TEST_CASE("synthetic volumes") {
    Rng a(7), b(7);
    const SynthResult x = synth_volume(a, {24, 20, 16}, 3, 0.05);
    const SynthResult y = synth_volume(b, {24, 20, 16}, 3, 0.05);
    CHECK(x.image.data == y.image.data);
    CHECK(x.label.data == y.label.data);
    CHECK(x.objects.size() == 3);

    double fg = 0;
    for (float l : x.label.data) {
        REQUIRE((l == 0.0f || l == 1.0f));
        fg += l;
    }
    CHECK(fg > 0);
    // Label agrees with the ellipsoid definition at every voxel.
    const auto d = x.label.dims3();
    for (std::int64_t i = 0; i < d[0]; ++i)
        for (std::int64_t j = 0; j < d[1]; ++j)
            for (std::int64_t k = 0; k < d[2]; ++k) {
                bool inside = false;
                for (const auto &e : x.objects) {
                    double s = 0;
                    const double p[3] = {double(i), double(j), double(k)};
                    for (int t = 0; t < 3; ++t) s += std::pow((p[t] - e.center[t]) / e.radii[t], 2);
                    inside = inside || s <= 1.0;
                }
                REQUIRE(x.label.data[(i * d[1] + j) * d[2] + k] == (inside ? 1.0f : 0.0f));
            }
    Rng c(1);
    CHECK_THROWS_AS(synth_volume(c, {4, 16, 16}, 1, 0.0), ConfigError);
}
