#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "medvox/dft.hpp"
#include "medvox/errors.hpp"
#include "medvox/intensity.hpp"
#include "medvox/kspace.hpp"
#include "support.hpp"

using namespace medvox;

namespace {

// Definitional multi-dimensional DFT, 1/sqrt(N) normalised.
std::vector<std::complex<double>> direct_dft(const std::vector<double> &x, const std::vector<std::int64_t> &d) {
    std::array<std::int64_t, 3> n{1, 1, 1};
    for (std::size_t a = 0; a < d.size(); ++a) n[a] = d[a];
    const std::int64_t total = n[0] * n[1] * n[2];
    std::vector<std::complex<double>> out(static_cast<std::size_t>(total));
    for (std::int64_t k0 = 0; k0 < n[0]; ++k0)
        for (std::int64_t k1 = 0; k1 < n[1]; ++k1)
            for (std::int64_t k2 = 0; k2 < n[2]; ++k2) {
                std::complex<double> acc = 0;
                for (std::int64_t m0 = 0; m0 < n[0]; ++m0)
                    for (std::int64_t m1 = 0; m1 < n[1]; ++m1)
                        for (std::int64_t m2 = 0; m2 < n[2]; ++m2) {
                            const double frac = double(k0 * m0 % n[0]) / n[0] + double(k1 * m1 % n[1]) / n[1] +
                                                double(k2 * m2 % n[2]) / n[2];
                            acc += x[(m0 * n[1] + m1) * n[2] + m2] * std::polar(1.0, -2.0 * std::numbers::pi * frac);
                        }
                out[(k0 * n[1] + k1) * n[2] + k2] = acc / std::sqrt(double(total));
            }
    return out;
}

std::vector<double> random_real(std::size_t n, std::uint64_t seed) {
    Rng r(seed);
    std::vector<double> x(n);
    for (auto &v : x) v = r.uniform(-1, 1);
    return x;
}

} // namespace

TEST_CASE("dft3 equals the definitional DFT") {
    for (const auto &dims : std::vector<std::vector<std::int64_t>>{{7}, {4, 6}, {3, 5, 2}, {8, 8, 8}, {1, 5, 1}}) {
        std::int64_t n = 1;
        for (auto d : dims) n *= d;
        const auto x = random_real(static_cast<std::size_t>(n), 17);
        const ComplexVolume k = dft3(x, dims);
        const auto ref = direct_dft(x, dims);
        double err = 0;
        for (std::size_t i = 0; i < ref.size(); ++i) {
            err = std::max(err, std::abs(std::complex<double>(k.re[i], k.im[i]) - ref[i]));
        }
        CHECK(err <= 1e-9);
    }
}

TEST_CASE("dft3 is unitary") {
    const std::vector<std::int64_t> dims{9, 10, 11};
    const auto x = random_real(990, 3);
    const ComplexVolume k = dft3(x, dims);
    double ex = 0, ek = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ex += x[i] * x[i];
        ek += k.re[i] * k.re[i] + k.im[i] * k.im[i];
    }
    CHECK(std::abs(ex - ek) <= 1e-9 * ex);
    const ComplexVolume back = idft3_complex(k);
    for (std::size_t i = 0; i < x.size(); ++i) {
        REQUIRE(std::abs(back.re[i] - x[i]) <= 1e-9);
        REQUIRE(std::abs(back.im[i]) <= 1e-9);
    }
    CHECK_THROWS_AS(dft3(x, {5, 5}), TransformError);
}

TEST_CASE("conjugate bins") {
    const std::vector<std::int64_t> dims{4, 3, 5};
    CHECK(conjugate_bin(0, dims) == 0);
    // (1, 2, 3) -> (3, 1, 2)
    CHECK(conjugate_bin((1 * 3 + 2) * 5 + 3, dims) == (3 * 3 + 1) * 5 + 2);
    // (2, 0, 0) is its own partner on an even axis.
    CHECK(conjugate_bin((2 * 3 + 0) * 5, dims) == (2 * 3 + 0) * 5);
}

TEST_CASE("k-space spike changes only the claimed bins") {
    const std::vector<std::int64_t> dims{6, 5, 4};
    const auto x = random_real(120, 5);
    const ComplexVolume k = dft3(x, dims);
    SpikeDraw d;
    d.do_transform = true;
    d.gain = 0.8;
    d.location_u = {0.37};
    const auto bins = spike_bins(d, dims);
    REQUIRE(bins.size() == 1);
    CHECK(bins[0] == 1 + static_cast<std::int64_t>(0.37 * 119));
    const auto mirror = conjugate_bin(bins[0], dims);

    ComplexVolume s = k;
    spike_kspace(s, bins, d.gain);
    double max_mag = 0;
    for (std::size_t i = 0; i < k.size(); ++i) max_mag = std::max(max_mag, std::hypot(k.re[i], k.im[i]));
    for (std::size_t i = 0; i < k.size(); ++i) {
        const bool claimed = static_cast<std::int64_t>(i) == bins[0] || static_cast<std::int64_t>(i) == mirror;
        if (!claimed) {
            REQUIRE(s.re[i] == k.re[i]);
            REQUIRE(s.im[i] == k.im[i]);
        } else {
            CHECK(std::hypot(s.re[i], s.im[i]) == doctest::Approx(0.8 * max_mag).epsilon(1e-12));
        }
    }
    CHECK(std::atan2(s.im[bins[0]], s.re[bins[0]]) == doctest::Approx(std::atan2(k.im[bins[0]], k.re[bins[0]])));

    // The spiked spectrum is Hermitian, so the image stays real.
    const ComplexVolume img = idft3_complex(s);
    for (double v : img.im) REQUIRE(std::abs(v) <= 1e-9);

    MetaVolume vol({1, 6, 5, 4});
    for (std::size_t i = 0; i < 120; ++i) vol.data[i] = static_cast<float>(x[i]);
    const MetaVolume out = apply_kspace_spike(vol, d);
    const ComplexVolume ko = dft3(out.channel(0), dims);
    for (std::size_t i = 0; i < k.size(); ++i) {
        const bool claimed = static_cast<std::int64_t>(i) == bins[0] || static_cast<std::int64_t>(i) == mirror;
        const double change = std::hypot(ko.re[i] - k.re[i], ko.im[i] - k.im[i]);
        if (!claimed) REQUIRE(change < 1e-5);
    }
    CHECK(out.applied.back().extra.list("locations") == std::vector<double>{double(bins[0])});
}

TEST_CASE("spike draws are gate first with a fixed count") {
    SpikeParams on, off;
    off.prob = 0.0;
    on.count = off.count = 2;
    Rng a(4), b(4);
    const SpikeDraw x = draw_kspace_spike(a, on);
    const SpikeDraw y = draw_kspace_spike(b, off);
    CHECK(a.state() == b.state());
    CHECK(x.do_transform);
    CHECK_FALSE(y.do_transform);
    CHECK(x.location_u == y.location_u);
    MetaVolume v = test::random_volume({1, 4, 4, 4}, 1);
    CHECK(apply_kspace_spike(v, y).data == v.data);
}

TEST_CASE("normalize intensity") {
    MetaVolume v = test::random_volume({2, 6, 5, 4}, 2, -2, 5);
    const MetaVolume n = normalize_intensity(v);
    for (std::int64_t c = 0; c < 2; ++c) {
        double s = 0, s2 = 0;
        for (float x : n.channel(c)) {
            s += x;
            s2 += double(x) * x;
        }
        const double m = s / 120;
        CHECK(std::abs(m) < 1e-6);
        CHECK(s2 / 120 - m * m == doctest::Approx(1.0).epsilon(1e-5));
    }
    CHECK(can_invert_intensity(n.applied.back()));
    const MetaVolume back = invert_intensity(n, n.applied.back());
    CHECK(test::max_abs_diff(back.data, v.data) < 1e-5);

    MetaVolume z({1, 4, 4}, 0.0f);
    z.data[3] = 2.0f;
    z.data[5] = 4.0f;
    const MetaVolume nz = normalize_intensity(z, true);
    CHECK(nz.data[0] == 0.0f);
    CHECK(nz.data[3] == doctest::Approx(-1.0));
    CHECK(nz.data[5] == doctest::Approx(1.0));
    CHECK_FALSE(can_invert_intensity(nz.applied.back()));

    const MetaVolume flat = normalize_intensity(MetaVolume({1, 3, 3}, 7.0f));
    for (float f : flat.data) CHECK(f == 0.0f);
}

TEST_CASE("scale intensity range") {
    MetaVolume v({1, 5});
    v.data = {-10, 0, 50, 100, 200};
    const MetaVolume s = scale_intensity_range(v, 0, 100, -1, 1, false);
    CHECK(s.data == std::vector<float>{-1.2f, -1.0f, 0.0f, 1.0f, 3.0f});
    const MetaVolume c = scale_intensity_range(v, 0, 100, -1, 1, true);
    CHECK(c.data == std::vector<float>{-1.0f, -1.0f, 0.0f, 1.0f, 1.0f});
    CHECK_FALSE(can_invert_intensity(c.applied.back()));
    CHECK(test::max_abs_diff(invert_intensity(s, s.applied.back()).data, v.data) < 1e-4);
    CHECK_THROWS_AS(scale_intensity_range(v, 1, 1, 0, 1, false), TransformError);
}

TEST_CASE("gaussian noise") {
    const MetaVolume v({1, 40, 40, 40}, 1.0f);
    Rng a(1), b(1);
    const MetaVolume x = rand_gaussian_noise(v, a, 0.0, 0.5, 1.0);
    const MetaVolume y = rand_gaussian_noise(v, b, 0.0, 0.5, 1.0);
    CHECK(x.data == y.data);
    double s = 0, s2 = 0;
    for (float f : x.data) {
        s += f - 1.0;
        s2 += (f - 1.0) * (f - 1.0);
    }
    const double n = 64000;
    CHECK(std::abs(s / n) < 0.01);
    CHECK(std::sqrt(s2 / n) == doctest::Approx(0.5).epsilon(0.02));
    Rng c(1);
    const MetaVolume off = rand_gaussian_noise(v, c, 0.0, 0.5, 0.0);
    CHECK(off.data == v.data);
    CHECK_FALSE(off.applied.back().do_transform);
}
