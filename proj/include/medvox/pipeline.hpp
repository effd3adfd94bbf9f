#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "medvox/meta_volume.hpp"
#include "medvox/transform.hpp"

namespace medvox {

using DataDict = std::map<std::string, MetaVolume>;
using Item = std::variant<MetaVolume, DataDict>;

struct TransformStep {
    std::string name; // unique within a pipeline
    TransformPtr transform;
    std::optional<std::vector<std::string>> keys; // unset: every key of a dict item
    std::vector<std::string> label_keys;          // interpolated nearest-neighbour
};

// Process-wide seed for pipelines built without an explicit one. Call before
// constructing pipelines; not synchronised against concurrent construction.
void set_determinism(std::optional<std::uint64_t> seed);
std::optional<std::uint64_t> determinism_seed();
std::uint64_t default_pipeline_seed();

struct InvertOptions {
    std::optional<std::size_t> depth; // records to pop; unset pops everything
    // Pop intensity records without touching the data (predictions live in a
    // different intensity space than the inputs that were augmented).
    bool spatial_only = false;
};

class Pipeline {
  public:
    Pipeline();
    explicit Pipeline(std::vector<TransformStep> steps, std::optional<std::uint64_t> seed = std::nullopt);

    // {"seed": u64, "steps": [{"name", "args", "keys", "label_keys"}]}
    static Pipeline from_json(const nlohmann::json &config);
    nlohmann::json to_json() const;

    // Appends a step; its name is the transform type, suffixed "#n" on repeats.
    Pipeline &add(TransformPtr t, std::optional<std::vector<std::string>> keys = std::nullopt,
                  std::vector<std::string> label_keys = {});

    const std::vector<TransformStep> &steps() const { return steps_; }
    std::size_t size() const { return steps_.size(); }
    std::uint64_t base_seed() const { return base_seed_; }
    void set_base_seed(std::uint64_t s) { base_seed_ = s; }

    // Index of the first random step (size() when none).
    std::size_t deterministic_prefix_len() const;
    // Canonical JSON of the steps before the first random one.
    nlohmann::json prefix_config() const;

    static std::uint64_t item_seed(std::uint64_t base, std::uint64_t index, std::uint64_t epoch);
    static std::uint64_t step_seed(std::uint64_t item_seed, std::size_t step);

    Item apply(Item item, std::uint64_t index, std::uint64_t epoch) const;
    MetaVolume apply(const MetaVolume &v, std::uint64_t index, std::uint64_t epoch) const;
    // Steps [begin, end) with per-step seeds derived from `item_seed`.
    Item apply_range(Item item, std::uint64_t item_seed, std::size_t begin, std::size_t end) const;
    Item apply_seeded(Item item, std::uint64_t item_seed) const;

  private:
    std::vector<TransformStep> steps_;
    std::uint64_t base_seed_;
};

// Pops trace records last-in-first-out, undoing each one with do_transform
// set. Throws InversionError on an empty stack or a non-invertible record.
MetaVolume invert(const MetaVolume &v, const InvertOptions &opts = {});
Item invert(const Item &item, const InvertOptions &opts = {});

} // namespace medvox
