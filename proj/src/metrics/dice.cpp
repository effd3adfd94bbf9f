#include <string>

#include "medvox/errors.hpp"
#include "medvox/metrics.hpp"

namespace medvox {

namespace {

void check_shapes(const MetaVolume &a, const MetaVolume &b) {
    if (a.shape != b.shape || a.data.size() != b.data.size()) throw ConfigError("metric inputs differ in shape");
}

} // namespace

ConfusionCounts confusion(const MetaVolume &pred, const MetaVolume &truth) {
    check_shapes(pred, truth);
    ConfusionCounts c;
    const auto n = static_cast<std::size_t>(pred.channels());
    c.tp.assign(n, 0);
    c.fp.assign(n, 0);
    c.fn.assign(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        const auto p = pred.channel(static_cast<std::int64_t>(k));
        const auto g = truth.channel(static_cast<std::int64_t>(k));
        for (std::size_t i = 0; i < p.size(); ++i) {
            const bool pp = p[i] >= 0.5f, gg = g[i] >= 0.5f;
            c.tp[k] += pp && gg;
            c.fp[k] += pp && !gg;
            c.fn[k] += !pp && gg;
        }
    }
    return c;
}

DiceResult dice_metric(const MetaVolume &pred, const MetaVolume &truth) {
    const ConfusionCounts c = confusion(pred, truth);
    DiceResult r;
    double sum = 0.0;
    int defined = 0;
    for (std::size_t k = 0; k < c.tp.size(); ++k) {
        const std::int64_t den = 2 * c.tp[k] + c.fp[k] + c.fn[k];
        if (den == 0) {
            r.per_class.emplace_back();
            continue;
        }
        const double d = 2.0 * static_cast<double>(c.tp[k]) / static_cast<double>(den);
        r.per_class.emplace_back(d);
        sum += d;
        ++defined;
    }
    if (defined > 0) r.mean = sum / defined;
    return r;
}

void DiceMetric::add(const MetaVolume &pred, const MetaVolume &truth) {
    for (const auto &d : dice_metric(pred, truth).per_class) {
        if (!d) continue;
        sum_ += *d;
        ++count_;
    }
}

std::optional<double> DiceMetric::aggregate() const {
    if (count_ == 0) return std::nullopt;
    return sum_ / static_cast<double>(count_);
}

void DiceMetric::reset() {
    sum_ = 0.0;
    count_ = 0;
}

} // namespace medvox
