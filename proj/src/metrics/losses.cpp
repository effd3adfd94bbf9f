#include <algorithm>
#include <cmath>

#include "medvox/errors.hpp"
#include "medvox/metrics.hpp"

namespace medvox {

namespace {

void check_shapes(const MetaVolume &a, const MetaVolume &b) {
    if (a.shape != b.shape || a.data.size() != b.data.size()) throw ConfigError("loss inputs differ in shape");
    if (a.data.empty()) throw ConfigError("loss inputs are empty");
}

struct Sums {
    double pg = 0, p = 0, g = 0, fp = 0, fn = 0;
};

std::vector<Sums> class_sums(const MetaVolume &pred, const MetaVolume &truth) {
    check_shapes(pred, truth);
    std::vector<Sums> out(static_cast<std::size_t>(pred.channels()));
    for (std::int64_t c = 0; c < pred.channels(); ++c) {
        const auto p = pred.channel(c);
        const auto g = truth.channel(c);
        Sums &s = out[static_cast<std::size_t>(c)];
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double pi = p[i], gi = g[i];
            s.pg += pi * gi;
            s.p += pi;
            s.g += gi;
            s.fp += pi * (1.0 - gi);
            s.fn += (1.0 - pi) * gi;
        }
    }
    return out;
}

} // namespace

double dice_loss(const MetaVolume &pred, const MetaVolume &truth, double smooth) {
    const auto sums = class_sums(pred, truth);
    double acc = 0.0;
    for (const auto &s : sums) acc += (2.0 * s.pg + smooth) / (s.p + s.g + smooth);
    return 1.0 - acc / static_cast<double>(sums.size());
}

double generalized_dice_loss(const MetaVolume &pred, const MetaVolume &truth, double smooth) {
    const auto sums = class_sums(pred, truth);
    double num = 0.0, den = 0.0;
    for (const auto &s : sums) {
        const double w = s.g > 0.0 ? 1.0 / (s.g * s.g) : 0.0;
        num += w * s.pg;
        den += w * (s.p + s.g);
    }
    return 1.0 - (2.0 * num + smooth) / (den + smooth);
}

double tversky_loss(const MetaVolume &pred, const MetaVolume &truth, double alpha, double beta, double smooth) {
    if (alpha < 0 || beta < 0) throw ConfigError("tversky weights must be >= 0");
    const auto sums = class_sums(pred, truth);
    double acc = 0.0;
    for (const auto &s : sums) {
        acc += (2.0 * s.pg + smooth) / (2.0 * s.pg + 2.0 * alpha * s.fp + 2.0 * beta * s.fn + smooth);
    }
    return 1.0 - acc / static_cast<double>(sums.size());
}

double focal_loss(const MetaVolume &pred, const MetaVolume &truth, double gamma, double clamp) {
    check_shapes(pred, truth);
    if (gamma < 0) throw ConfigError("focal gamma must be >= 0");
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        const double p = std::clamp(static_cast<double>(pred.data[i]), clamp, 1.0 - clamp);
        const double g = truth.data[i];
        acc -= g * std::pow(1.0 - p, gamma) * std::log(p) + (1.0 - g) * std::pow(p, gamma) * std::log(1.0 - p);
    }
    return acc / static_cast<double>(pred.data.size());
}

double mse_loss(const MetaVolume &a, const MetaVolume &b) {
    check_shapes(a, b);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = static_cast<double>(a.data[i]) - b.data[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.data.size());
}

} // namespace medvox
