#include "medvox/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <thread>

#include <unistd.h>

#include <json.hpp>

#include "medvox/errors.hpp"
#include "medvox/mvld.hpp"
#include "medvox/mvol.hpp"
#include "medvox/nifti.hpp"
#include "medvox/sha256.hpp"

namespace medvox {

namespace fs = std::filesystem;

// ---------------------------------------------------------------- DataSource

DataSource::DataSource(std::vector<ItemDescriptor> items, VolumeLoader loader)
    : items_(std::move(items)), loader_(std::move(loader)) {
    if (!loader_) loader_ = [](const std::string &p) { return nifti_load(p); };
}

DataSource DataSource::from_directory(const fs::path &dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
    std::vector<std::string> names;
    for (const auto &e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".nii") names.push_back(e.path().filename().string());
    }
    std::sort(names.begin(), names.end());
    const std::set<std::string> all(names.begin(), names.end());

    std::vector<ItemDescriptor> items;
    for (const auto &n : names) {
        if (n.rfind("lbl_", 0) == 0 && all.count("img_" + n.substr(4))) continue;
        if (n.rfind("img_", 0) == 0 && all.count("lbl_" + n.substr(4))) {
            items.emplace_back(std::map<std::string, std::string>{{"image", (dir / n).string()},
                                                                  {"label", (dir / ("lbl_" + n.substr(4))).string()}});
        } else {
            items.emplace_back((dir / n).string());
        }
    }
    return DataSource(std::move(items));
}

const ItemDescriptor &DataSource::descriptor(std::size_t index) const {
    if (index >= items_.size()) {
        throw ConfigError("dataset index " + std::to_string(index) + " out of range (size " +
                          std::to_string(items_.size()) + ")");
    }
    return items_[index];
}

std::string DataSource::canonical(std::size_t index) const {
    const auto &d = descriptor(index);
    if (const auto *p = std::get_if<std::string>(&d)) return nlohmann::json(*p).dump();
    return nlohmann::json(std::get<std::map<std::string, std::string>>(d)).dump();
}

Item DataSource::load(std::size_t index) const {
    const auto &d = descriptor(index);
    if (const auto *p = std::get_if<std::string>(&d)) return loader_(*p);
    DataDict out;
    for (const auto &[k, path] : std::get<std::map<std::string, std::string>>(d)) out.emplace(k, loader_(path));
    return out;
}

// ---------------------------------------------------------------- Dataset

Dataset::Dataset(DataSource source, Pipeline pipeline) : source_(std::move(source)), pipeline_(std::move(pipeline)) {}

void Dataset::check_index(std::size_t index) const { (void)source_.descriptor(index); }

Item Dataset::run_prefix(std::size_t index) const {
    Item item = source_.load(index);
    ++stats_.loads;
    ++stats_.prefix;
    // The prefix holds no random steps, so any seed gives the same result.
    return pipeline_.apply_range(std::move(item), 0, 0, pipeline_.deterministic_prefix_len());
}

Item Dataset::run_suffix(Item item, std::size_t index, std::uint64_t epoch) const {
    ++stats_.suffix;
    const std::uint64_t seed = Pipeline::item_seed(pipeline_.base_seed(), index, epoch);
    return pipeline_.apply_range(std::move(item), seed, pipeline_.deterministic_prefix_len(), pipeline_.size());
}

Item Dataset::get(std::size_t index, std::uint64_t epoch) const {
    check_index(index);
    return run_suffix(run_prefix(index), index, epoch);
}

DatasetCounters Dataset::counters() const {
    DatasetCounters c;
    c.loads = stats_.loads;
    c.prefix_executions = stats_.prefix;
    c.suffix_executions = stats_.suffix;
    c.cache_hits = stats_.hits;
    c.cache_misses = stats_.misses;
    c.warnings = stats_.warnings;
    return c;
}

void Dataset::reset_counters() {
    stats_.loads = 0;
    stats_.prefix = 0;
    stats_.suffix = 0;
    stats_.hits = 0;
    stats_.misses = 0;
    stats_.warnings = 0;
}

// ---------------------------------------------------------------- CacheDataset

CacheDataset::CacheDataset(DataSource source, Pipeline pipeline, double cache_rate)
    : Dataset(std::move(source), std::move(pipeline)) {
    if (!(cache_rate >= 0.0 && cache_rate <= 1.0)) throw ConfigError("cache_rate must be in [0, 1]");
    const auto n = static_cast<std::size_t>(std::floor(cache_rate * static_cast<double>(size())));
    slots_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) slots_.push_back(std::make_unique<Slot>());
}

Item CacheDataset::get(std::size_t index, std::uint64_t epoch) const {
    check_index(index);
    if (index >= slots_.size()) return Dataset::get(index, epoch);
    Slot &slot = *slots_[index];
    bool computed = false;
    std::call_once(slot.once, [&] {
        slot.value = run_prefix(index);
        computed = true;
    });
    ++(computed ? stats_.misses : stats_.hits);
    return run_suffix(slot.value, index, epoch);
}

// ---------------------------------------------------------------- PersistentDataset

PersistentDataset::PersistentDataset(DataSource source, Pipeline pipeline, fs::path cache_dir)
    : Dataset(std::move(source), std::move(pipeline)), dir_(std::move(cache_dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (!fs::is_directory(dir_)) throw IoError("cannot create cache directory " + dir_.string());
    prefix_json_ = this->pipeline().prefix_config().dump();
}

std::string PersistentDataset::cache_key(std::size_t index) const {
    const std::string bytes = source().canonical(index) + prefix_json_;
    return to_hex(sha256(bytes));
}

fs::path PersistentDataset::cache_path(std::size_t index) const {
    const bool dict = std::holds_alternative<std::map<std::string, std::string>>(source().descriptor(index));
    return dir_ / (cache_key(index) + (dict ? ".mvold" : ".mvol"));
}

namespace {

Item decode_entry(const fs::path &path) {
    const auto bytes = read_file_bytes(path);
    if (path.extension() == ".mvold") return mvld_decode(bytes);
    return mvol_decode(bytes);
}

void write_atomic(const fs::path &path, const std::vector<std::uint8_t> &bytes) {
    static std::atomic<std::uint64_t> counter{0};
    const auto tid = std::hash<std::thread::id>{}(std::this_thread::get_id());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(tid) + "." + std::to_string(counter++);
    write_file_bytes(tmp, bytes);
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move cache entry into place: " + path.string());
    }
}

} // namespace

Item PersistentDataset::get(std::size_t index, std::uint64_t epoch) const {
    check_index(index);
    const fs::path path = cache_path(index);
    std::error_code ec;
    if (fs::exists(path, ec)) {
        std::optional<Item> cached;
        try {
            cached = decode_entry(path);
        } catch (const IoError &) {
            ++stats_.warnings;
        } catch (const TransformError &) {
            ++stats_.warnings;
        }
        if (cached) {
            ++stats_.hits;
            return run_suffix(std::move(*cached), index, epoch);
        }
    }
    ++stats_.misses;
    Item item = run_prefix(index);
    if (const auto *v = std::get_if<MetaVolume>(&item)) {
        write_atomic(path, mvol_encode(*v));
    } else {
        write_atomic(path, mvld_encode(std::get<DataDict>(item)));
    }
    return run_suffix(std::move(item), index, epoch);
}

} // namespace medvox
