#include "medvox/pipeline.hpp"

#include <map>

#include "medvox/errors.hpp"

namespace medvox {

using nlohmann::json;

Pipeline::Pipeline() : base_seed_(default_pipeline_seed()) {}

Pipeline::Pipeline(std::vector<TransformStep> steps, std::optional<std::uint64_t> seed)
    : base_seed_(seed ? *seed : default_pipeline_seed()) {
    for (auto &s : steps) add(std::move(s.transform), std::move(s.keys), std::move(s.label_keys));
}

Pipeline &Pipeline::add(TransformPtr t, std::optional<std::vector<std::string>> keys,
                        std::vector<std::string> label_keys) {
    if (!t) throw ConfigError("pipeline step has no transform");
    std::string name = t->type();
    int n = 1;
    auto taken = [&](const std::string &s) {
        for (const auto &st : steps_) {
            if (st.name == s) return true;
        }
        return false;
    };
    while (taken(name)) name = t->type() + "#" + std::to_string(++n);
    steps_.push_back({std::move(name), std::move(t), std::move(keys), std::move(label_keys)});
    return *this;
}

namespace {

std::vector<std::string> string_list(const json &j, const char *what) {
    if (!j.is_array()) throw ConfigError(std::string("pipeline step '") + what + "' must be a list of strings");
    std::vector<std::string> out;
    for (const auto &e : j) {
        if (!e.is_string()) throw ConfigError(std::string("pipeline step '") + what + "' must be a list of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

} // namespace

Pipeline Pipeline::from_json(const json &config) {
    if (!config.is_object()) throw ConfigError("pipeline config must be an object");
    for (const auto &[k, _] : config.items()) {
        if (k != "seed" && k != "steps") throw ConfigError("pipeline config: unknown key '" + k + "'");
    }
    Pipeline p;
    if (config.contains("seed")) {
        const json &s = config["seed"];
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
            throw ConfigError("pipeline config: seed must be a non-negative integer");
        }
        p.base_seed_ = s.get<std::uint64_t>();
    }
    const json steps = config.value("steps", json::array());
    if (!steps.is_array()) throw ConfigError("pipeline config: steps must be a list");
    for (const auto &s : steps) {
        if (!s.is_object() || !s.contains("name") || !s["name"].is_string()) {
            throw ConfigError("pipeline config: each step needs a string 'name'");
        }
        for (const auto &[k, _] : s.items()) {
            if (k != "name" && k != "args" && k != "keys" && k != "label_keys") {
                throw ConfigError("pipeline config: unknown step key '" + k + "'");
            }
        }
        std::optional<std::vector<std::string>> keys;
        if (s.contains("keys")) keys = string_list(s["keys"], "keys");
        std::vector<std::string> labels;
        if (s.contains("label_keys")) labels = string_list(s["label_keys"], "label_keys");
        p.add(make_transform(s["name"].get<std::string>(), s.value("args", json::object())), std::move(keys),
              std::move(labels));
    }
    return p;
}

json Pipeline::to_json() const {
    json steps = json::array();
    for (const auto &s : steps_) {
        json j = s.transform->config();
        if (s.keys) j["keys"] = *s.keys;
        if (!s.label_keys.empty()) j["label_keys"] = s.label_keys;
        steps.push_back(std::move(j));
    }
    return {{"seed", base_seed_}, {"steps", steps}};
}

std::size_t Pipeline::deterministic_prefix_len() const {
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        if (steps_[i].transform->random()) return i;
    }
    return steps_.size();
}

json Pipeline::prefix_config() const {
    json steps = json::array();
    const std::size_t n = deterministic_prefix_len();
    for (std::size_t i = 0; i < n; ++i) {
        json j = steps_[i].transform->config();
        if (steps_[i].keys) j["keys"] = *steps_[i].keys;
        if (!steps_[i].label_keys.empty()) j["label_keys"] = steps_[i].label_keys;
        steps.push_back(std::move(j));
    }
    return steps;
}

std::uint64_t Pipeline::item_seed(std::uint64_t base, std::uint64_t index, std::uint64_t epoch) {
    return derive_seed(base, {epoch, index});
}

std::uint64_t Pipeline::step_seed(std::uint64_t item_seed, std::size_t step) {
    return derive_seed(item_seed, {static_cast<std::uint64_t>(step)});
}

namespace {

// Rethrows the in-flight exception as the same type with the step name prefixed.
[[noreturn]] void rethrow_with_step(const std::string &step) {
    const std::string prefix = "step '" + step + "': ";
    try {
        throw;
    } catch (const InversionError &e) {
        throw InversionError(prefix + e.what());
    } catch (const TransformError &e) {
        throw TransformError(prefix + e.what());
    } catch (const ConfigError &e) {
        throw ConfigError(prefix + e.what());
    } catch (const FormatError &e) {
        throw FormatError(e.code(), prefix + e.what());
    } catch (const IoError &e) {
        throw IoError(prefix + e.what());
    } catch (const Error &e) {
        throw Error(prefix + e.what());
    } catch (const std::exception &e) {
        throw TransformError(prefix + e.what());
    }
}

bool contains(const std::vector<std::string> &v, const std::string &s) {
    for (const auto &x : v) {
        if (x == s) return true;
    }
    return false;
}

} // namespace

Item Pipeline::apply_range(Item item, std::uint64_t item_seed, std::size_t begin, std::size_t end) const {
    end = std::min(end, steps_.size());
    for (std::size_t i = begin; i < end; ++i) {
        const TransformStep &st = steps_[i];
        try {
            Rng rng(step_seed(item_seed, i));
            const TransformInstance inst = st.transform->instantiate(rng);
            if (auto *v = std::get_if<MetaVolume>(&item)) {
                *v = inst(*v, false);
                continue;
            }
            auto &dict = std::get<DataDict>(item);
            std::vector<std::string> keys;
            if (st.keys) {
                keys = *st.keys;
            } else {
                for (const auto &[k, _] : dict) keys.push_back(k);
            }
            for (const auto &k : keys) {
                auto it = dict.find(k);
                if (it == dict.end()) throw TransformError("missing dictionary key '" + k + "'");
            }
            for (const auto &k : keys) {
                auto &vol = dict.at(k);
                vol = inst(vol, contains(st.label_keys, k));
            }
        } catch (...) {
            rethrow_with_step(st.name);
        }
    }
    return item;
}

Item Pipeline::apply_seeded(Item item, std::uint64_t item_seed) const {
    return apply_range(std::move(item), item_seed, 0, steps_.size());
}

Item Pipeline::apply(Item item, std::uint64_t index, std::uint64_t epoch) const {
    return apply_seeded(std::move(item), item_seed(base_seed_, index, epoch));
}

MetaVolume Pipeline::apply(const MetaVolume &v, std::uint64_t index, std::uint64_t epoch) const {
    return std::get<MetaVolume>(apply(Item{v}, index, epoch));
}

} // namespace medvox
