#include "medvox/predictors.hpp"

#include <cmath>
#include <cstdlib>

#include "medvox/errors.hpp"

namespace medvox {

MetaVolume gaussian_blur(const MetaVolume &v, double sigma) {
    if (!(sigma >= 0.0)) throw ConfigError("blur sigma must be >= 0");
    if (sigma == 0.0) return v;
    const auto radius = static_cast<std::int64_t>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double total = 0.0;
    for (std::int64_t i = -radius; i <= radius; ++i) {
        const double w = std::exp(-static_cast<double>(i * i) / (2.0 * sigma * sigma));
        kernel[i + radius] = w;
        total += w;
    }
    for (double &w : kernel) w /= total;

    MetaVolume out = v;
    const auto d = v.dims3();
    const std::array<std::int64_t, 3> stride{d[1] * d[2], d[2], 1};
    std::vector<double> buf;
    for (std::int64_t c = 0; c < v.channels(); ++c) {
        std::vector<double> cur(out.channel(c).begin(), out.channel(c).end());
        for (int a = 0; a < 3; ++a) {
            if (d[a] == 1) continue;
            buf.assign(cur.size(), 0.0);
            for (std::int64_t i = 0; i < d[0]; ++i) {
                for (std::int64_t j = 0; j < d[1]; ++j) {
                    for (std::int64_t k = 0; k < d[2]; ++k) {
                        const std::array<std::int64_t, 3> idx{i, j, k};
                        const std::int64_t at = i * stride[0] + j * stride[1] + k;
                        const std::int64_t base = at - idx[a] * stride[a];
                        double acc = 0.0;
                        for (std::int64_t t = -radius; t <= radius; ++t) {
                            const std::int64_t p = std::clamp<std::int64_t>(idx[a] + t, 0, d[a] - 1);
                            acc += kernel[t + radius] * cur[base + p * stride[a]];
                        }
                        buf[at] = acc;
                    }
                }
            }
            cur.swap(buf);
        }
        auto ch = out.channel(c);
        for (std::size_t i = 0; i < cur.size(); ++i) ch[i] = static_cast<float>(cur[i]);
    }
    return out;
}

namespace {

double parse_number(const std::string &s, const std::string &spec) {
    char *end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(x)) {
        throw ConfigError("bad predictor spec '" + spec + "'");
    }
    return x;
}

MetaVolume threshold(MetaVolume v, double t) {
    for (auto &x : v.data) x = x >= t ? 1.0f : 0.0f;
    return v;
}

BatchPredictor per_window(std::function<MetaVolume(const MetaVolume &)> f) {
    return [f = std::move(f)](const std::vector<MetaVolume> &batch) {
        std::vector<MetaVolume> out;
        out.reserve(batch.size());
        for (const auto &w : batch) out.push_back(f(w));
        return out;
    };
}

} // namespace

BatchPredictor make_stub_predictor(const std::string &spec) {
    if (spec == "identity") return per_window([](const MetaVolume &w) { return w; });
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw ConfigError("unknown predictor '" + spec + "'");
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    if (kind == "threshold") {
        const double t = parse_number(rest, spec);
        return per_window([t](const MetaVolume &w) { return threshold(w, t); });
    }
    if (kind == "blur-threshold") {
        const auto comma = rest.find(',');
        if (comma == std::string::npos) throw ConfigError("blur-threshold needs <sigma>,<t>");
        const double sigma = parse_number(rest.substr(0, comma), spec);
        const double t = parse_number(rest.substr(comma + 1), spec);
        if (sigma < 0) throw ConfigError("blur-threshold sigma must be >= 0");
        return per_window([sigma, t](const MetaVolume &w) { return threshold(gaussian_blur(w, sigma), t); });
    }
    throw ConfigError("unknown predictor '" + spec + "'");
}

} // namespace medvox
