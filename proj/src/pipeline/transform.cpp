#include "medvox/transform.hpp"

#include <algorithm>
#include <numeric>

#include "medvox/errors.hpp"

namespace medvox {

OneOf::OneOf(std::vector<TransformPtr> children, std::vector<double> weights)
    : children_(std::move(children)), weights_(std::move(weights)) {
    if (children_.empty()) throw ConfigError("OneOf needs at least one transform");
    if (weights_.empty()) weights_.assign(children_.size(), 1.0);
    if (weights_.size() != children_.size()) throw ConfigError("OneOf: weights and transforms differ in length");
    double total = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0)) throw ConfigError("OneOf: weights must be >= 0");
        total += w;
    }
    if (!(total > 0.0)) throw ConfigError("OneOf: at least one weight must be > 0");
}

nlohmann::json OneOf::args() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto &c : children_) list.push_back(c->config());
    return {{"transforms", list}, {"weights", weights_}};
}

bool OneOf::invertible() const {
    return std::all_of(children_.begin(), children_.end(), [](const TransformPtr &c) { return c->invertible(); });
}

bool OneOf::spatial() const {
    return std::any_of(children_.begin(), children_.end(), [](const TransformPtr &c) { return c->spatial(); });
}

std::size_t OneOf::choose(Rng &rng) const {
    const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    const double u = rng.uniform() * total;
    double cum = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (weights_[i] <= 0.0) continue;
        last_positive = i;
        cum += weights_[i];
        if (u < cum) return i;
    }
    return last_positive;
}

TransformInstance OneOf::instantiate(Rng &rng) const {
    const std::size_t idx = choose(rng);
    TransformInstance child = children_[idx]->instantiate(rng);
    return [child = std::move(child), idx](const MetaVolume &v, bool is_label) {
        MetaVolume out = child(v, is_label);
        TraceRecord rec;
        rec.transform_id = "OneOf";
        rec.orig_size = out.spatial_shape();
        rec.orig_affine = out.affine;
        rec.extra.set("index", static_cast<double>(idx));
        out.applied.push_back(std::move(rec));
        return out;
    };
}

MetaVolume one_of(const std::vector<TransformPtr> &steps, const std::vector<double> &weights, Rng &rng,
                  const MetaVolume &item) {
    const OneOf chooser(steps, weights);
    return chooser.instantiate(rng)(item, false);
}

} // namespace medvox
