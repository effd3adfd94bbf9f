#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "medvox/errors.hpp"
#include "medvox/metrics.hpp"
#include "support.hpp"

using namespace medvox;

namespace {

MetaVolume mask1d(std::vector<float> values) {
    MetaVolume v({1, static_cast<std::int64_t>(values.size())});
    v.data = std::move(values);
    return v;
}

MetaVolume random_mask(std::vector<std::int64_t> shape, Rng &rng, double p) {
    MetaVolume v(std::move(shape));
    for (auto &x : v.data) x = rng.uniform() < p ? 1.0f : 0.0f;
    return v;
}

// Set-based Dice per channel.
std::vector<std::optional<double>> set_dice(const MetaVolume &a, const MetaVolume &b) {
    std::vector<std::optional<double>> out;
    const auto n = static_cast<std::size_t>(a.voxels_per_channel());
    for (std::int64_t c = 0; c < a.channels(); ++c) {
        std::set<std::size_t> sa, sb, both;
        for (std::size_t i = 0; i < n; ++i) {
            if (a.data[c * n + i] >= 0.5f) sa.insert(i);
            if (b.data[c * n + i] >= 0.5f) sb.insert(i);
        }
        std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(both, both.begin()));
        if (sa.empty() && sb.empty()) {
            out.push_back(std::nullopt);
        } else {
            out.push_back(2.0 * both.size() / static_cast<double>(sa.size() + sb.size()));
        }
    }
    return out;
}

// Brute-force bending energy for rank-3 fields.
double bending_oracle(const DisplacementField &f) {
    const auto &d = f.dims;
    auto at = [&](int c, std::int64_t i, std::int64_t j, std::int64_t k) {
        return f.data[static_cast<std::size_t>(((c * d[0] + i) * d[1] + j) * d[2] + k)];
    };
    double total = 0.0;
    std::int64_t count = 0;
    for (std::int64_t i = 1; i + 1 < d[0]; ++i)
        for (std::int64_t j = 1; j + 1 < d[1]; ++j)
            for (std::int64_t k = 1; k + 1 < d[2]; ++k) {
                ++count;
                for (int c = 0; c < 3; ++c) {
                    const double dii = at(c, i + 1, j, k) - 2 * at(c, i, j, k) + at(c, i - 1, j, k);
                    const double djj = at(c, i, j + 1, k) - 2 * at(c, i, j, k) + at(c, i, j - 1, k);
                    const double dkk = at(c, i, j, k + 1) - 2 * at(c, i, j, k) + at(c, i, j, k - 1);
                    const double dij = (at(c, i + 1, j + 1, k) - at(c, i + 1, j - 1, k) - at(c, i - 1, j + 1, k) +
                                        at(c, i - 1, j - 1, k)) / 4;
                    const double dik = (at(c, i + 1, j, k + 1) - at(c, i + 1, j, k - 1) - at(c, i - 1, j, k + 1) +
                                        at(c, i - 1, j, k - 1)) / 4;
                    const double djk = (at(c, i, j + 1, k + 1) - at(c, i, j + 1, k - 1) - at(c, i, j - 1, k + 1) +
                                        at(c, i, j - 1, k - 1)) / 4;
                    total += dii * dii + djj * djj + dkk * dkk + 2 * (dij * dij + dik * dik + djk * djk);
                }
            }
    return total / static_cast<double>(count);
}

DisplacementField field3(std::int64_t n, const std::function<std::array<double, 3>(double, double, double)> &u) {
    DisplacementField f({n, n, n});
    const auto vox = f.voxels();
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j)
            for (std::int64_t k = 0; k < n; ++k) {
                const auto v = u(double(i), double(j), double(k));
                for (int c = 0; c < 3; ++c) f.data[static_cast<std::size_t>(c * vox + (i * n + j) * n + k)] = v[c];
            }
    return f;
}

} // namespace

TEST_CASE("dice examples") {
    CHECK(*dice_metric(mask1d({1, 1, 0, 0}), mask1d({0, 1, 1, 0})).mean == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(*dice_metric(mask1d({1, 1, 0, 0}), mask1d({1, 0, 0, 0})).mean == doctest::Approx(2.0 / 3.0));
    CHECK(*dice_metric(mask1d({1, 1}), mask1d({1, 1})).mean == 1.0);
    CHECK(*dice_metric(mask1d({0, 0, 1}), mask1d({1, 1, 0})).mean == 0.0);
    // Soft values binarise at 0.5.
    CHECK(*dice_metric(mask1d({0.5f, 0.49f}), mask1d({1, 0})).mean == 1.0);

    const DiceResult empty = dice_metric(mask1d({0, 0}), mask1d({0, 0}));
    CHECK_FALSE(empty.per_class[0].has_value());
    CHECK_FALSE(empty.mean.has_value());

    MetaVolume two({2, 3});
    two.data = {1, 1, 0, 0, 0, 0};
    MetaVolume truth({2, 3});
    truth.data = {1, 0, 0, 0, 0, 0};
    const DiceResult r = dice_metric(two, truth);
    CHECK(r.per_class[0].has_value());
    CHECK_FALSE(r.per_class[1].has_value());
    CHECK(*r.mean == doctest::Approx(2.0 / 3.0));

    CHECK_THROWS_AS(dice_metric(mask1d({1, 0}), mask1d({1, 0, 0})), ConfigError);
}

TEST_CASE("dice matches a set oracle and is symmetric") {
    Rng rng(17);
    for (int t = 0; t < 200; ++t) {
        const double p = rng.uniform(0.0, 0.6);
        const MetaVolume a = random_mask({2, 6, 5, 4}, rng, p);
        const MetaVolume b = random_mask({2, 6, 5, 4}, rng, p);
        const auto expect = set_dice(a, b);
        const auto got = dice_metric(a, b);
        const auto sym = dice_metric(b, a);
        for (std::size_t c = 0; c < 2; ++c) {
            REQUIRE(got.per_class[c].has_value() == expect[c].has_value());
            if (expect[c]) {
                REQUIRE(std::abs(*got.per_class[c] - *expect[c]) <= 1e-12);
                REQUIRE(*got.per_class[c] == *sym.per_class[c]);
            }
        }
    }
}

TEST_CASE("DiceMetric accumulates defined pairs") {
    DiceMetric m;
    CHECK_FALSE(m.aggregate().has_value());
    m.add(mask1d({1, 1, 0, 0}), mask1d({0, 1, 1, 0})); // 0.5
    m.add(mask1d({0, 0}), mask1d({0, 0}));             // undefined
    m.add(mask1d({1, 0}), mask1d({1, 0}));             // 1
    CHECK(m.defined_count() == 2);
    CHECK(*m.aggregate() == doctest::Approx(0.75));
    m.reset();
    CHECK(m.defined_count() == 0);
}

TEST_CASE("losses against direct formulas") {
    Rng rng(3);
    MetaVolume p({2, 4, 4, 4}), g({2, 4, 4, 4});
    for (auto &x : p.data) x = static_cast<float>(rng.uniform(0.01, 0.99));
    for (auto &x : g.data) x = rng.uniform() < 0.3 ? 1.0f : 0.0f;

    const std::size_t n = 64;
    const double s = 1e-5;
    double dice_sum = 0, ce = 0, mse = 0;
    double gdl_num = 0, gdl_den = 0;
    double tv = 0;
    for (int c = 0; c < 2; ++c) {
        double pg = 0, ps = 0, gs = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double pi = p.data[c * n + i], gi = g.data[c * n + i];
            pg += pi * gi;
            ps += pi;
            gs += gi;
            fp += pi * (1 - gi);
            fn += (1 - pi) * gi;
            ce += -(gi * std::log(pi) + (1 - gi) * std::log(1 - pi));
            mse += (pi - gi) * (pi - gi);
        }
        dice_sum += (2 * pg + s) / (ps + gs + s);
        const double w = gs > 0 ? 1.0 / (gs * gs) : 0.0;
        gdl_num += w * pg;
        gdl_den += w * (ps + gs);
        tv += (2 * pg + s) / (2 * pg + 2 * 0.3 * fp + 2 * 0.7 * fn + s);
    }
    CHECK(std::abs(dice_loss(p, g) - (1 - dice_sum / 2)) <= 1e-9);
    CHECK(std::abs(tversky_loss(p, g, 0.5, 0.5) - dice_loss(p, g)) <= 1e-9);
    CHECK(std::abs(tversky_loss(p, g, 0.3, 0.7) - (1 - tv / 2)) <= 1e-9);
    CHECK(std::abs(focal_loss(p, g, 0.0) - ce / 128) <= 1e-9);
    CHECK(focal_loss(p, g, 2.0) < focal_loss(p, g, 0.0));
    CHECK(std::abs(mse_loss(p, g) - mse / 128) <= 1e-9);
    CHECK(std::abs(generalized_dice_loss(p, g) - (1 - (2 * gdl_num + s) / (gdl_den + s))) <= 1e-9);

    CHECK(dice_loss(g, g) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(mse_loss(p, p) == 0.0);
    CHECK_THROWS_AS(mse_loss(p, mask1d({1})), ConfigError);
}

TEST_CASE("bending energy") {
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        // Affine fields with dyadic coefficients have exactly zero second differences.
        std::array<double, 12> a{};
        for (auto &x : a) x = std::floor(rng.uniform(-16.0, 16.0)) / 8.0;
        const auto f = field3(6, [&](double x, double y, double z) {
            return std::array<double, 3>{a[0] * x + a[1] * y + a[2] * z + a[3], a[4] * x + a[5] * y + a[6] * z + a[7],
                                         a[8] * x + a[9] * y + a[10] * z + a[11]};
        });
        REQUIRE(bending_energy(f) == 0.0);
    }
    const auto quad = field3(5, [](double x, double, double) { return std::array<double, 3>{x * x, 0, 0}; });
    CHECK(bending_energy(quad) == doctest::Approx(4.0).epsilon(1e-12));

    DisplacementField r({5, 6, 7});
    for (auto &x : r.data) x = rng.uniform(-1, 1);
    CHECK(std::abs(bending_energy(r) - bending_oracle(r)) <= 1e-12);
    DisplacementField shifted = r;
    for (auto &x : shifted.data) x += 0.75;
    CHECK(std::abs(bending_energy(shifted) - bending_energy(r)) <= 1e-9);

    DisplacementField two({5, 5});
    for (std::int64_t i = 0; i < 5; ++i)
        for (std::int64_t j = 0; j < 5; ++j) two.data[static_cast<std::size_t>(i * 5 + j)] = double(i * j);
    // u = (xy, 0): mixed derivative 1, counted for both ordered pairs.
    CHECK(bending_energy(two) == doctest::Approx(2.0));

    CHECK_THROWS(bending_energy(DisplacementField({2, 5, 5})));
}

TEST_CASE("occlusion sensitivity") {
    MetaVolume img({1, 4, 4});
    for (std::size_t i = 0; i < 16; ++i) img.data[i] = static_cast<float>(i);
    // Score is the value of voxel (1, 2); fill 0.
    const ScorePredictor pick = [](const MetaVolume &v) { return std::vector<double>{v.data[6]}; };
    const MetaVolume m = occlusion_sensitivity(img, pick, 0, {2, 2}, {2, 2}, 0.0);
    CHECK(m.shape == std::vector<std::int64_t>{1, 4, 4});
    for (std::int64_t i = 0; i < 4; ++i)
        for (std::int64_t j = 0; j < 4; ++j) {
            const float expect = (i < 2 && j >= 2) ? -6.0f : 0.0f;
            CHECK(m.data[static_cast<std::size_t>(i * 4 + j)] == expect);
        }

    // Mean fill on a constant image changes nothing.
    MetaVolume flat({1, 3, 3, 3});
    std::fill(flat.data.begin(), flat.data.end(), 2.5f);
    const ScorePredictor sum = [](const MetaVolume &v) {
        double s = 0;
        for (float f : v.data) s += f;
        return std::vector<double>{s, -s};
    };
    const MetaVolume z = occlusion_sensitivity(flat, sum, 1, {2, 2, 2}, {1, 1, 1});
    for (float f : z.data) CHECK(f == 0.0f);

    CHECK_THROWS_AS(occlusion_sensitivity(img, pick, 3, {2, 2}, {2, 2}), ConfigError);
    CHECK_THROWS_AS(occlusion_sensitivity(img, pick, 0, {5, 2}, {2, 2}), ConfigError);
}

TEST_CASE("occlusion worked examples") {
    // Region of ones; the predictor scores the mean over a marked 2x2x2 region.
    MetaVolume ones({1, 4, 4, 4});
    std::fill(ones.data.begin(), ones.data.end(), 1.0f);
    auto in_region = [](std::int64_t i, std::int64_t j, std::int64_t k) {
        return i >= 1 && i < 3 && j >= 1 && j < 3 && k >= 1 && k < 3;
    };
    const ScorePredictor region_mean = [&](const MetaVolume &v) {
        double s = 0;
        for (std::int64_t i = 0; i < 4; ++i)
            for (std::int64_t j = 0; j < 4; ++j)
                for (std::int64_t k = 0; k < 4; ++k)
                    if (in_region(i, j, k)) s += v.data[static_cast<std::size_t>((i * 4 + j) * 4 + k)];
        return std::vector<double>{s / 8.0};
    };
    const MetaVolume m = occlusion_sensitivity(ones, region_mean, 0, {2, 2, 2}, {2, 2, 2}, 0.0);
    for (std::int64_t ci = 0; ci < 2; ++ci)
        for (std::int64_t cj = 0; cj < 2; ++cj)
            for (std::int64_t ck = 0; ck < 2; ++ck) {
                // Box [2c, 2c+2) meets the region [1, 3) in one voxel per axis.
                const double expect = -1.0 / 8.0;
                CHECK(m.data[static_cast<std::size_t>(((2 * ci) * 4 + 2 * cj) * 4 + 2 * ck)] ==
                      doctest::Approx(expect));
            }

    const ScorePredictor ignore = [](const MetaVolume &) { return std::vector<double>{3.0}; };
    for (float f : occlusion_sensitivity(ones, ignore, 0, {2, 2, 2}, {1, 1, 1}).data) CHECK(f == 0.0f);

    MetaVolume img = test::random_volume({1, 3, 4, 5}, 6);
    const ScorePredictor total = [](const MetaVolume &v) {
        double s = 0;
        for (float f : v.data) s += f;
        return std::vector<double>{s};
    };
    const MetaVolume single = occlusion_sensitivity(img, total, 0, {3, 4, 5}, {3, 4, 5}, 0.25);
    const double expect = 0.25 * 60 - total(img)[0];
    for (float f : single.data) CHECK(f == doctest::Approx(expect).epsilon(1e-5));
}

TEST_CASE("metric invariants") {
    Rng rng(12);
    for (int t = 0; t < 20; ++t) {
        const MetaVolume a = random_mask({1, 6, 6, 6}, rng, 0.4);
        const MetaVolume b = random_mask({1, 6, 6, 6}, rng, 0.4);
        CHECK(std::abs(*dice_metric(a, b).mean - (1.0 - dice_loss(a, b))) <= 1e-4);

        MetaVolume p({1, 6, 6, 6});
        for (auto &x : p.data) x = static_cast<float>(rng.uniform(0.05, 0.95));
        std::vector<std::size_t> perm(p.data.size());
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size(); i > 1; --i)
            std::swap(perm[i - 1], perm[static_cast<std::size_t>(rng.uniform() * i)]);
        MetaVolume pp = p, bp = b;
        for (std::size_t i = 0; i < perm.size(); ++i) {
            pp.data[i] = p.data[perm[i]];
            bp.data[i] = b.data[perm[i]];
        }
        CHECK(dice_loss(pp, bp) == doctest::Approx(dice_loss(p, b)).epsilon(1e-12));
        CHECK(generalized_dice_loss(pp, bp) == doctest::Approx(generalized_dice_loss(p, b)).epsilon(1e-12));
        CHECK(tversky_loss(pp, bp, 0.2, 0.8) == doctest::Approx(tversky_loss(p, b, 0.2, 0.8)).epsilon(1e-12));
        CHECK(focal_loss(pp, bp, 2.0) == doctest::Approx(focal_loss(p, b, 2.0)).epsilon(1e-12));
        CHECK(mse_loss(pp, bp) == doctest::Approx(mse_loss(p, b)).epsilon(1e-12));
    }
    CHECK(bending_energy(DisplacementField({4, 4, 4})) == 0.0);
}
