#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "medvox/pipeline.hpp"

namespace medvox {

// A file path, or a key -> path dictionary.
using ItemDescriptor = std::variant<std::string, std::map<std::string, std::string>>;
using VolumeLoader = std::function<MetaVolume(const std::string &path)>;

class DataSource {
  public:
    // The default loader reads NIfTI-1.
    explicit DataSource(std::vector<ItemDescriptor> items, VolumeLoader loader = {});

    // Every *.nii in `dir`, sorted. Files named img_<id>.nii with a matching
    // lbl_<id>.nii become {"image", "label"} items.
    static DataSource from_directory(const std::filesystem::path &dir);

    std::size_t size() const { return items_.size(); }
    const ItemDescriptor &descriptor(std::size_t index) const;
    // Canonical bytes of the descriptor (JSON, sorted keys); feeds cache keys.
    std::string canonical(std::size_t index) const;
    Item load(std::size_t index) const;

  private:
    std::vector<ItemDescriptor> items_;
    VolumeLoader loader_;
};

struct DatasetCounters {
    std::uint64_t loads = 0;
    std::uint64_t prefix_executions = 0; // items pushed through the deterministic prefix
    std::uint64_t suffix_executions = 0;
    std::uint64_t cache_hits = 0;
    std::uint64_t cache_misses = 0;
    std::uint64_t warnings = 0; // corrupt or unreadable cache entries that were rebuilt
};

// Plain dataset: load and run the whole pipeline on every call.
class Dataset {
  public:
    Dataset(DataSource source, Pipeline pipeline);
    virtual ~Dataset() = default;
    Dataset(const Dataset &) = delete;
    Dataset &operator=(const Dataset &) = delete;

    std::size_t size() const { return source_.size(); }
    const Pipeline &pipeline() const { return pipeline_; }
    const DataSource &source() const { return source_; }

    // Thread-safe for distinct or equal indices.
    virtual Item get(std::size_t index, std::uint64_t epoch) const;

    DatasetCounters counters() const;
    void reset_counters();

  protected:
    void check_index(std::size_t index) const;
    Item run_prefix(std::size_t index) const;
    Item run_suffix(Item item, std::size_t index, std::uint64_t epoch) const;

    struct Atomics {
        std::atomic<std::uint64_t> loads{0}, prefix{0}, suffix{0}, hits{0}, misses{0}, warnings{0};
    };
    mutable Atomics stats_;

  private:
    DataSource source_;
    Pipeline pipeline_;
};

// Memoises the deterministic prefix of the first floor(cache_rate * size)
// items in memory; each is computed at most once per process.
class CacheDataset : public Dataset {
  public:
    CacheDataset(DataSource source, Pipeline pipeline, double cache_rate = 1.0);

    Item get(std::size_t index, std::uint64_t epoch) const override;
    std::size_t cached_items() const { return slots_.size(); }

  private:
    struct Slot {
        std::once_flag once;
        Item value;
    };
    std::vector<std::unique_ptr<Slot>> slots_;
};

// Stores deterministic-prefix results as "<cache_dir>/<sha256 hex>.mvol"
// (".mvold" for dictionary items), written atomically.
class PersistentDataset : public Dataset {
  public:
    PersistentDataset(DataSource source, Pipeline pipeline, std::filesystem::path cache_dir);

    Item get(std::size_t index, std::uint64_t epoch) const override;

    // SHA-256 over the canonical descriptor then the prefix config JSON.
    std::string cache_key(std::size_t index) const;
    std::filesystem::path cache_path(std::size_t index) const;

  private:
    std::filesystem::path dir_;
    std::string prefix_json_;
};

} // namespace medvox
