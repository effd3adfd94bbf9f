#include "medvox/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "medvox/dataset.hpp"
#include "medvox/errors.hpp"
#include "medvox/inference.hpp"
#include "medvox/meta_json.hpp"
#include "medvox/metrics.hpp"
#include "medvox/nifti.hpp"
#include "medvox/pipeline.hpp"
#include "medvox/predictors.hpp"
#include "medvox/render.hpp"
#include "medvox/synth.hpp"

namespace medvox {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json read_json(const fs::path &path) {
    const auto bytes = read_file_bytes(path);
    try {
        return json::parse(bytes.begin(), bytes.end());
    } catch (const json::exception &e) {
        throw ConfigError("invalid JSON in '" + path.string() + "': " + e.what());
    }
}

void write_text(const fs::path &path, const std::string &text) {
    write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t *>(text.data()), text.size()));
}

// "32" or "32,32,16"; a single value is repeated for every axis.
std::vector<std::int64_t> parse_dims(const std::string &s, std::size_t rank, const char *what) {
    std::vector<std::int64_t> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        char *end = nullptr;
        const long long v = std::strtoll(part.c_str(), &end, 10);
        if (part.empty() || *end != '\0' || v < 1) throw ConfigError(std::string("bad ") + what + " '" + s + "'");
        out.push_back(v);
    }
    if (out.size() == 1 && rank > 1) out.assign(rank, out[0]);
    if (out.size() != rank) {
        throw ConfigError(std::string(what) + " needs 1 or " + std::to_string(rank) + " values, got '" + s + "'");
    }
    return out;
}

fs::path trace_path(const fs::path &out) {
    fs::path p = out;
    p += ".trace.json";
    return p;
}

// ---------------------------------------------------------------- transform

struct TransformArgs {
    std::vector<std::string> in, out, keys;
    std::string pipeline;
    std::optional<std::uint64_t> seed;
};

int cmd_transform(const TransformArgs &a, std::ostream &out) {
    if (a.in.size() != a.out.size()) throw ConfigError("--in and --out must be given the same number of times");
    if (!a.keys.empty() && a.keys.size() != a.in.size()) {
        throw ConfigError("--key must be given once per --in");
    }
    if (a.keys.empty() && a.in.size() != 1) throw ConfigError("several inputs need one --key each");
    Pipeline p = Pipeline::from_json(read_json(a.pipeline));
    if (a.seed) p.set_base_seed(*a.seed);

    Item item;
    if (a.keys.empty()) {
        item = nifti_load(a.in[0]);
    } else {
        DataDict d;
        for (std::size_t i = 0; i < a.in.size(); ++i) {
            if (!d.emplace(a.keys[i], nifti_load(a.in[i])).second) throw ConfigError("duplicate --key " + a.keys[i]);
        }
        item = std::move(d);
    }
    const Item result = p.apply(std::move(item), 0, 0);

    auto save = [&](const MetaVolume &v, const fs::path &path) {
        nifti_save(v, path);
        const json sidecar{{"applied", trace_stack_to_json(v.applied)}};
        write_text(trace_path(path), sidecar.dump(2) + "\n");
        out << "wrote " << path.string() << "\n";
    };
    if (const auto *v = std::get_if<MetaVolume>(&result)) {
        save(*v, a.out[0]);
    } else {
        const auto &d = std::get<DataDict>(result);
        for (std::size_t i = 0; i < a.keys.size(); ++i) save(d.at(a.keys[i]), a.out[i]);
    }
    return kExitOk;
}

// ---------------------------------------------------------------- invert

int cmd_invert(const std::string &in, const std::string &trace, const std::string &outp, std::ostream &out) {
    MetaVolume v = nifti_load(in);
    const json j = read_json(trace);
    if (!j.is_object() || !j.contains("applied")) throw ConfigError("trace file needs an 'applied' list");
    try {
        v.applied = trace_stack_from_json(j["applied"]);
    } catch (const FormatError &e) {
        throw ConfigError(std::string("bad trace file: ") + e.what());
    }
    MetaVolume result = v.applied.empty() ? v : invert(v);
    nifti_save(result, outp);
    out << "wrote " << outp << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- infer

struct InferArgs {
    std::string in, out, predictor = "identity", roi = "64", blend = "constant";
    double overlap = 0.25;
    std::size_t batch = 4;
};

int cmd_infer(const InferArgs &a, std::ostream &out) {
    const BatchPredictor pred = make_stub_predictor(a.predictor);
    SlidingWindowParams sw;
    sw.overlap = a.overlap;
    sw.blend = parse_blend_mode(a.blend);
    sw.batch_size = a.batch;
    if (!(a.overlap >= 0.0 && a.overlap < 1.0)) throw ConfigError("--overlap must be in [0, 1)");
    const MetaVolume v = nifti_load(a.in);
    sw.roi = parse_dims(a.roi, v.spatial_shape().size(), "--roi");
    MetaVolume seg = sliding_window_infer(v, sw, pred);
    nifti_save(seg, a.out);
    out << "wrote " << a.out << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- benchmark-cache

struct BenchArgs {
    std::string dataset_dir, pipeline, mode = "memory", cache_dir;
    std::size_t epochs = 3;
    double cache_rate = 1.0;
    bool json = false;
};

int cmd_benchmark(const BenchArgs &a, std::ostream &out) {
    DataSource src = DataSource::from_directory(a.dataset_dir);
    Pipeline p = Pipeline::from_json(read_json(a.pipeline));
    std::unique_ptr<Dataset> ds;
    std::string cache_dir;
    if (a.mode == "none") {
        ds = std::make_unique<Dataset>(std::move(src), std::move(p));
    } else if (a.mode == "memory") {
        ds = std::make_unique<CacheDataset>(std::move(src), std::move(p), a.cache_rate);
    } else if (a.mode == "persistent") {
        cache_dir = a.cache_dir;
        if (cache_dir.empty()) {
            const char *env = std::getenv("MEDVOX_CACHE_DIR");
            cache_dir = env && *env ? env : (fs::path(a.dataset_dir) / ".medvox_cache").string();
        }
        ds = std::make_unique<PersistentDataset>(std::move(src), std::move(p), cache_dir);
    } else {
        throw ConfigError("--mode must be none, memory or persistent");
    }

    json epochs = json::array();
    DatasetCounters before;
    for (std::size_t e = 0; e < a.epochs; ++e) {
        const auto t0 = std::chrono::steady_clock::now();
        for (std::size_t i = 0; i < ds->size(); ++i) (void)ds->get(i, e);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const DatasetCounters now = ds->counters();
        epochs.push_back({{"epoch", e},
                          {"prefix_executions", now.prefix_executions - before.prefix_executions},
                          {"suffix_executions", now.suffix_executions - before.suffix_executions},
                          {"seconds", secs}});
        before = now;
    }
    const DatasetCounters c = ds->counters();
    json report{{"mode", a.mode},
                {"items", ds->size()},
                {"epochs", a.epochs},
                {"prefix_executions", c.prefix_executions},
                {"suffix_executions", c.suffix_executions},
                {"cache_hits", c.cache_hits},
                {"cache_misses", c.cache_misses},
                {"warnings", c.warnings},
                {"per_epoch", epochs}};
    if (!cache_dir.empty()) report["cache_dir"] = cache_dir;
    if (a.json) {
        out << report.dump(2) << "\n";
        return kExitOk;
    }
    char line[128];
    out << "mode " << a.mode << ", " << ds->size() << " items\n";
    out << "epoch  prefix-executions  suffix-executions  seconds\n";
    for (const auto &e : epochs) {
        std::snprintf(line, sizeof line, "%5llu  %17llu  %17llu  %.4f\n",
                      static_cast<unsigned long long>(e["epoch"].get<std::size_t>()),
                      static_cast<unsigned long long>(e["prefix_executions"].get<std::uint64_t>()),
                      static_cast<unsigned long long>(e["suffix_executions"].get<std::uint64_t>()),
                      e["seconds"].get<double>());
        out << line;
    }
    out << "total prefix-executions " << c.prefix_executions << ", suffix-executions " << c.suffix_executions
        << ", warnings " << c.warnings << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    std::string out_dir, dims = "32";
    int count = 1, objects = 3;
    double noise = 0.05;
    std::uint64_t seed = 0;
};

int cmd_synth(const SynthArgs &a, std::ostream &out) {
    if (a.count < 0) throw ConfigError("--count must be >= 0");
    if (a.objects < 0) throw ConfigError("--objects must be >= 0");
    if (a.noise < 0) throw ConfigError("--noise must be >= 0");
    const auto dims = parse_dims(a.dims, 3, "--dims");
    std::error_code ec;
    fs::create_directories(a.out_dir, ec);
    if (!fs::is_directory(a.out_dir)) throw IoError("cannot create '" + a.out_dir + "'");
    for (int i = 0; i < a.count; ++i) {
        Rng rng(derive_seed(a.seed, {static_cast<std::uint64_t>(i)}));
        const SynthResult r = synth_volume(rng, dims, a.objects, a.noise);
        char name[32];
        std::snprintf(name, sizeof name, "img_%03d.nii", i);
        nifti_save(r.image, fs::path(a.out_dir) / name);
        std::snprintf(name, sizeof name, "lbl_%03d.nii", i);
        nifti_save(r.label, fs::path(a.out_dir) / name);
    }
    out << "wrote " << a.count << " image/label pairs to " << a.out_dir << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- dice

int cmd_dice(const std::string &pred, const std::string &truth, bool as_json, std::ostream &out) {
    const MetaVolume p = nifti_load(pred);
    const MetaVolume t = nifti_load(truth);
    if (p.shape != t.shape) throw ConfigError("prediction and truth differ in shape");
    const DiceResult r = dice_metric(p, t);
    if (as_json) {
        json per = json::array();
        for (const auto &d : r.per_class) per.push_back(d ? json(*d) : json(nullptr));
        out << json{{"per_class", per}, {"mean", r.mean ? json(*r.mean) : json(nullptr)}}.dump() << "\n";
        return kExitOk;
    }
    for (std::size_t c = 0; c < r.per_class.size(); ++c) {
        out << "class " << c << ": " << (r.per_class[c] ? fmt(*r.per_class[c]) : "undefined") << "\n";
    }
    out << "mean: " << (r.mean ? fmt(*r.mean) : "undefined") << "\n";
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Medical volume pipelines: transforms, inversion, inference, caching, metrics"};
    app.name("medvox");
    app.require_subcommand(1, 1);

    TransformArgs ta;
    std::uint64_t t_seed = 0;
    auto *tr = app.add_subcommand("transform", "Apply a pipeline config to NIfTI volumes");
    tr->add_option("--in", ta.in, "Input NIfTI (repeat with --key for dictionaries)")->required();
    tr->add_option("--out", ta.out, "Output NIfTI, one per --in")->required();
    tr->add_option("--pipeline", ta.pipeline, "Pipeline JSON")->required();
    auto *seed_opt = tr->add_option("--seed", t_seed, "Overrides the config seed");
    tr->add_option("--key", ta.keys, "Dictionary key for each --in");

    std::string inv_in, inv_trace, inv_out;
    auto *inv = app.add_subcommand("invert", "Undo a transform run using its trace sidecar");
    inv->add_option("--in", inv_in)->required();
    inv->add_option("--trace", inv_trace, "Defaults to <in>.trace.json");
    inv->add_option("--out", inv_out)->required();

    InferArgs ia;
    auto *inf = app.add_subcommand("infer", "Sliding-window inference with a stub predictor");
    inf->add_option("--in", ia.in)->required();
    inf->add_option("--out", ia.out)->required();
    inf->add_option("--predictor", ia.predictor, "identity | threshold:<t> | blur-threshold:<sigma>,<t>");
    inf->add_option("--roi", ia.roi, "Window size, one value or one per axis");
    inf->add_option("--overlap", ia.overlap, "In [0, 1)");
    inf->add_option("--blend", ia.blend, "constant | gaussian");
    inf->add_option("--batch", ia.batch);

    BenchArgs ba;
    auto *bench = app.add_subcommand("benchmark-cache", "Iterate a dataset and report prefix/suffix executions");
    bench->add_option("--dataset-dir", ba.dataset_dir)->required();
    bench->add_option("--pipeline", ba.pipeline)->required();
    bench->add_option("--epochs", ba.epochs);
    bench->add_option("--mode", ba.mode, "none | memory | persistent");
    bench->add_option("--cache-dir", ba.cache_dir, "Defaults to $MEDVOX_CACHE_DIR");
    bench->add_option("--cache-rate", ba.cache_rate);
    bench->add_flag("--json", ba.json);

    std::string m_in, m_out;
    int m_axis = 2, m_every = 1;
    auto *mon = app.add_subcommand("montage", "Tile slices into a PPM image");
    mon->add_option("--in", m_in)->required();
    mon->add_option("--out", m_out)->required();
    mon->add_option("--axis", m_axis);
    mon->add_option("--every", m_every);

    std::string b_image, b_label, b_out;
    double b_alpha = 0.5;
    int b_axis = 2, b_every = 1;
    auto *bl = app.add_subcommand("blend", "Overlay a label on an image as a PPM montage");
    bl->add_option("--image", b_image)->required();
    bl->add_option("--label", b_label)->required();
    bl->add_option("--out", b_out)->required();
    bl->add_option("--alpha", b_alpha);
    bl->add_option("--axis", b_axis);
    bl->add_option("--every", b_every);

    SynthArgs sa;
    auto *syn = app.add_subcommand("synth", "Write synthetic image/label NIfTI pairs");
    syn->add_option("--out-dir", sa.out_dir)->required();
    syn->add_option("--count", sa.count);
    syn->add_option("--dims", sa.dims);
    syn->add_option("--objects", sa.objects);
    syn->add_option("--noise", sa.noise);
    syn->add_option("--seed", sa.seed);

    std::string d_pred, d_truth;
    bool d_json = false;
    auto *dice = app.add_subcommand("dice", "Dice per class and mean");
    dice->add_option("--pred", d_pred)->required();
    dice->add_option("--truth", d_truth)->required();
    dice->add_flag("--json", d_json);

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*tr) {
            if (*seed_opt) ta.seed = t_seed;
            return cmd_transform(ta, out);
        }
        if (*inv) return cmd_invert(inv_in, inv_trace.empty() ? trace_path(inv_in).string() : inv_trace, inv_out, out);
        if (*inf) return cmd_infer(ia, out);
        if (*bench) return cmd_benchmark(ba, out);
        if (*mon) {
            write_ppm(montage(nifti_load(m_in), m_axis, m_every), m_out);
            out << "wrote " << m_out << "\n";
            return kExitOk;
        }
        if (*bl) {
            write_ppm(blend_montage(nifti_load(b_image), nifti_load(b_label), b_alpha, b_axis, b_every), b_out);
            out << "wrote " << b_out << "\n";
            return kExitOk;
        }
        if (*syn) return cmd_synth(sa, out);
        if (*dice) return cmd_dice(d_pred, d_truth, d_json, out);
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError &e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const TransformError &e) {
        err << "error: " << e.what() << "\n";
        return kExitTransform;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}

} // namespace medvox
