#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "medvox/meta_volume.hpp"
#include "medvox/rng.hpp"

namespace medvox {

// One randomised application of a transform. `is_label` asks spatial
// transforms to interpolate with nearest-neighbour.
using TransformInstance = std::function<MetaVolume(const MetaVolume &, bool is_label)>;

// A pipeline step. Random transforms draw every random quantity in
// instantiate(), gate first, with a fixed number of draws per call, so one
// instance can be applied identically to every key of a dictionary item.
class Transform {
  public:
    virtual ~Transform() = default;

    virtual std::string type() const = 0;
    // Canonical arguments with defaults filled in; feeds cache keys.
    virtual nlohmann::json args() const = 0;
    virtual bool random() const { return false; }
    virtual bool invertible() const = 0;
    virtual bool spatial() const = 0;
    virtual TransformInstance instantiate(Rng &rng) const = 0;

    nlohmann::json config() const { return {{"name", type()}, {"args", args()}}; }
};

using TransformPtr = std::shared_ptr<const Transform>;

// Builds a built-in transform from its config name and JSON arguments.
// Unknown names, unknown argument keys and bad values raise ConfigError.
TransformPtr make_transform(const std::string &name, const nlohmann::json &args = nlohmann::json::object());
std::vector<std::string> builtin_transform_names();

// Weighted choice of one child per call; records the chosen index.
class OneOf final : public Transform {
  public:
    OneOf(std::vector<TransformPtr> children, std::vector<double> weights);

    std::string type() const override { return "OneOf"; }
    nlohmann::json args() const override;
    bool random() const override { return true; }
    bool invertible() const override;
    bool spatial() const override;
    TransformInstance instantiate(Rng &rng) const override;

    // Index picked by one uniform draw against the normalised weights.
    std::size_t choose(Rng &rng) const;

  private:
    std::vector<TransformPtr> children_;
    std::vector<double> weights_;
};

MetaVolume one_of(const std::vector<TransformPtr> &steps, const std::vector<double> &weights, Rng &rng,
                  const MetaVolume &item);

} // namespace medvox
