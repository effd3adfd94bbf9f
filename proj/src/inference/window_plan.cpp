#include <algorithm>
#include <cmath>

#include "medvox/errors.hpp"
#include "medvox/inference.hpp"

namespace medvox {

BlendMode parse_blend_mode(std::string_view s) {
    if (s == "constant") return BlendMode::Constant;
    if (s == "gaussian") return BlendMode::Gaussian;
    throw ConfigError("unknown blend mode '" + std::string(s) + "' (expected constant or gaussian)");
}

std::string_view to_string(BlendMode m) { return m == BlendMode::Constant ? "constant" : "gaussian"; }

WindowPlan plan_windows(const std::vector<std::int64_t> &dims, const std::vector<std::int64_t> &roi, double overlap) {
    if (!(overlap >= 0.0 && overlap < 1.0)) throw ConfigError("overlap must be in [0, 1)");
    if (roi.size() != dims.size()) throw ConfigError("roi needs one entry per spatial axis");
    WindowPlan plan;
    plan.dims = dims;
    plan.overlap = overlap;
    for (std::size_t a = 0; a < dims.size(); ++a) {
        if (roi[a] < 1) throw ConfigError("roi entries must be >= 1");
        if (dims[a] < 1) throw ConfigError("dims must be >= 1");
        const std::int64_t r = std::min(roi[a], dims[a]);
        plan.roi.push_back(r);
        const auto interval =
            std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(static_cast<double>(r) * (1.0 - overlap))));
        const std::int64_t n = dims[a] <= r ? 1 : (dims[a] - r + interval - 1) / interval + 1;
        std::vector<std::int64_t> s;
        for (std::int64_t i = 0; i < n; ++i) {
            const std::int64_t start = std::min(i * interval, dims[a] - r);
            if (s.empty() || s.back() != start) s.push_back(start);
        }
        plan.starts.push_back(std::move(s));
    }
    plan.origins.push_back({});
    for (const auto &axis : plan.starts) {
        std::vector<std::vector<std::int64_t>> next;
        for (const auto &o : plan.origins) {
            for (std::int64_t s : axis) {
                auto e = o;
                e.push_back(s);
                next.push_back(std::move(e));
            }
        }
        plan.origins = std::move(next);
    }
    return plan;
}

std::vector<float> make_importance_map(const std::vector<std::int64_t> &roi, BlendMode mode) {
    std::int64_t n = 1;
    for (auto r : roi) {
        if (r < 1) throw ConfigError("roi entries must be >= 1");
        n *= r;
    }
    if (mode == BlendMode::Constant) return std::vector<float>(static_cast<std::size_t>(n), 1.0f);

    std::vector<std::vector<double>> axes;
    for (auto r : roi) {
        const double sigma = 0.125 * static_cast<double>(r);
        const double c = (static_cast<double>(r) - 1.0) / 2.0;
        std::vector<double> g(static_cast<std::size_t>(r));
        for (std::int64_t i = 0; i < r; ++i) {
            const double x = static_cast<double>(i) - c;
            g[i] = std::exp(-x * x / (2.0 * sigma * sigma));
        }
        axes.push_back(std::move(g));
    }
    std::vector<double> map{1.0};
    for (const auto &g : axes) {
        std::vector<double> next;
        next.reserve(map.size() * g.size());
        for (double m : map) {
            for (double x : g) next.push_back(m * x);
        }
        map = std::move(next);
    }
    const double peak = *std::max_element(map.begin(), map.end());
    std::vector<float> out(map.size());
    for (std::size_t i = 0; i < map.size(); ++i) out[i] = static_cast<float>(std::max(map[i] / peak, 1e-3));
    return out;
}

} // namespace medvox
