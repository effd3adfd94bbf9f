#include <algorithm>
#include <cmath>
#include <set>

#include "medvox/errors.hpp"
#include "medvox/intensity.hpp"
#include "medvox/kspace.hpp"
#include "medvox/spatial.hpp"
#include "medvox/transform.hpp"

namespace medvox {

using nlohmann::json;

namespace {

// Typed, strict reader over a transform's JSON arguments.
class Args {
  public:
    Args(std::string owner, const json &j) : owner_(std::move(owner)), j_(j) {
        if (!j_.is_null() && !j_.is_object()) fail("args must be an object");
    }

    double number(const char *key, std::optional<double> def = std::nullopt) {
        const json *v = get(key);
        if (v == nullptr) return require(def, key);
        if (!v->is_number()) fail(std::string(key) + " must be a number");
        return v->get<double>();
    }

    bool boolean(const char *key, bool def) {
        const json *v = get(key);
        if (v == nullptr) return def;
        if (!v->is_boolean()) fail(std::string(key) + " must be a boolean");
        return v->get<bool>();
    }

    std::string string(const char *key, std::optional<std::string> def = std::nullopt) {
        const json *v = get(key);
        if (v == nullptr) return require(def, key);
        if (!v->is_string()) fail(std::string(key) + " must be a string");
        return v->get<std::string>();
    }

    // Accepts a number (broadcast later by the op) or a list of numbers.
    std::vector<double> numbers(const char *key, std::optional<std::vector<double>> def = std::nullopt) {
        const json *v = get(key);
        if (v == nullptr) return require(def, key);
        if (v->is_number()) return {v->get<double>()};
        if (!v->is_array()) fail(std::string(key) + " must be a number or a list of numbers");
        std::vector<double> out;
        for (const auto &e : *v) {
            if (!e.is_number()) fail(std::string(key) + " must contain numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    std::vector<std::int64_t> ints(const char *key, std::optional<std::vector<std::int64_t>> def = std::nullopt) {
        const json *v = get(key);
        if (v == nullptr) return require(def, key);
        std::vector<std::int64_t> out;
        auto one = [&](const json &e) {
            if (!e.is_number_integer()) fail(std::string(key) + " must contain integers");
            out.push_back(e.get<std::int64_t>());
        };
        if (v->is_array()) {
            for (const auto &e : *v) one(e);
        } else {
            one(*v);
        }
        return out;
    }

    Interpolation interp(const char *default_padding) {
        Interpolation i;
        try {
            i.mode = parse_interp_mode(string("mode", "trilinear"));
            i.padding = parse_padding_mode(string("padding", default_padding));
        } catch (const ConfigError &e) {
            fail(e.what());
        }
        return i;
    }

    PaddingMode pad_mode(const char *key, const char *def) {
        try {
            return parse_padding_mode(string(key, def));
        } catch (const ConfigError &e) {
            fail(e.what());
        }
    }

    const json *raw(const char *key) { return get(key); }

    double probability(const char *key, double def) {
        const double p = number(key, def);
        if (!(p >= 0.0 && p <= 1.0)) fail(std::string(key) + " must be in [0, 1]");
        return p;
    }

    // Call once every argument has been read.
    void finish() const {
        if (!j_.is_object()) return;
        for (const auto &[k, _] : j_.items()) {
            if (!seen_.count(k)) fail("unknown argument '" + k + "'");
        }
    }

    [[noreturn]] void fail(const std::string &msg) const { throw ConfigError(owner_ + ": " + msg); }

  private:
    const json *get(const char *key) {
        seen_.insert(key);
        if (!j_.is_object()) return nullptr;
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    template <class T>
    T require(const std::optional<T> &def, const char *key) const {
        if (!def) fail(std::string("missing required argument '") + key + "'");
        return *def;
    }

    std::string owner_;
    const json &j_;
    std::set<std::string> seen_;
};

json interp_json(const Interpolation &i) {
    return {{"mode", std::string(to_string(i.mode))}, {"padding", std::string(to_string(i.padding))}};
}

Interpolation for_key(Interpolation i, bool is_label) {
    if (is_label) i.mode = InterpMode::Nearest;
    return i;
}

// Renames the newest record so the trace names the random transform.
MetaVolume relabel(MetaVolume v, std::string_view id) {
    v.applied.back().transform_id = std::string(id);
    return v;
}

MetaVolume skipped(const MetaVolume &v, std::string_view id) {
    MetaVolume out = v;
    TraceRecord rec = detail::begin_record(v, id);
    rec.do_transform = false;
    out.applied.push_back(std::move(rec));
    return out;
}

std::vector<double> broadcast3(std::vector<double> v, const Args &a, const char *what) {
    if (v.size() == 1) return {v[0], v[0], v[0]};
    if (v.empty() || v.size() > 3) a.fail(std::string(what) + " needs 1 to 3 values");
    while (v.size() < 3) v.push_back(0.0);
    return v;
}

// ---------------------------------------------------------------- spatial

class OrientationT final : public Transform {
  public:
    explicit OrientationT(const json &j) {
        Args a("Orientation", j);
        codes_ = a.string("axcodes", "RAS");
        a.finish();
    }
    std::string type() const override { return "Orientation"; }
    json args() const override { return {{"axcodes", codes_}}; }
    bool invertible() const override { return true; }
    bool spatial() const override { return true; }
    TransformInstance instantiate(Rng &) const override {
        return [codes = codes_](const MetaVolume &v, bool) { return orientation_to(v, codes); };
    }

  private:
    std::string codes_;
};

class SpacingT final : public Transform {
  public:
    explicit SpacingT(const json &j) {
        Args a("Spacing", j);
        pixdim_ = a.numbers("pixdim");
        interp_ = a.interp("border");
        a.finish();
        for (double p : pixdim_) {
            if (!(p > 0)) a.fail("pixdim must be > 0");
        }
    }
    std::string type() const override { return "Spacing"; }
    json args() const override {
        json j = interp_json(interp_);
        j["pixdim"] = pixdim_;
        return j;
    }
    bool invertible() const override { return true; }
    bool spatial() const override { return true; }
    TransformInstance instantiate(Rng &) const override {
        return [this](const MetaVolume &v, bool label) { return spacing_to(v, pixdim_, for_key(interp_, label)); };
    }

  private:
    std::vector<double> pixdim_;
    Interpolation interp_;
};

class FlipT final : public Transform {
  public:
    explicit FlipT(const json &j) {
        Args a("Flip", j);
        for (auto x : a.ints("axes", std::vector<std::int64_t>{0})) axes_.push_back(static_cast<int>(x));
        a.finish();
    }
    std::string type() const override { return "Flip"; }
    json args() const override { return {{"axes", axes_}}; }
    bool invertible() const override { return true; }
    bool spatial() const override { return true; }
    TransformInstance instantiate(Rng &) const override {
        return [axes = axes_](const MetaVolume &v, bool) { return flip(v, axes); };
    }

  private:
    std::vector<int> axes_;
};

class RotateT final : public Transform {
  public:
    explicit RotateT(const json &j) {
        Args a("Rotate", j);
        angles_ = a.numbers("angles");
        interp_ = a.interp("zeros");
        a.finish();
    }
    std::string type() const override { return "Rotate"; }
    json args() const override {
        json j = interp_json(interp_);
        j["angles"] = angles_;
        return j;
    }
    bool invertible() const override { return true; }
    bool spatial() const override { return true; }
    TransformInstance instantiate(Rng &) const override {
        return [this](const MetaVolume &v, bool label) { return rotate(v, angles_, for_key(interp_, label)); };
    }

  private:
    std::vector<double> angles_;
    Interpolation interp_;
};

class ZoomT final : public Transform {
  public:
    explicit ZoomT(const json &j) {
        Args a("Zoom", j);
        factors_ = a.numbers("factors");
        interp_ = a.interp("zeros");
        a.finish();
        for (double f : factors_) {
            if (!(f > 0)) a.fail("factors must be > 0");
        }
    }
    std::string type() const override { return "Zoom"; }
    json args() const override {
        json j = interp_json(interp_);
        j["factors"] = factors_;
        return j;
    }
    bool invertible() const override { return true; }
    bool spatial() const override { return true; }
    TransformInstance instantiate(Rng &) const override {
        return [this](const MetaVolume &v, bool label) { return zoom(v, factors_, for_key(interp_, label)); };
    }

  private:
    std::vector<double> factors_;
    Interpolation interp_;
};

class CropPadT final : public Transform {
  public:
    explicit CropPadT(const json &j) {
        Args a("CropPad", j);
        start_ = a.ints("start");
        size_ = a.ints("size");
        pad_ = a.pad_mode("pad_mode", "constant");
        a.finish();
        if (start_.size() != size_.size()) a.fail("start and size differ in length");
        for (auto s : size_) {
            if (s < 1) a.fail("size must be >= 1");
        }
    }
    std::string type() const override { return "CropPad"; }
    json args() const override {
        return {{"start", start_}, {"size", size_}, {"pad_mode", std::string(to_string(pad_))}};
    }
    bool invertible() const override { return true; }
    bool spatial() const override { return true; }
    TransformInstance instantiate(Rng &) const override {
        return [this](const MetaVolume &v, bool) { return crop_pad(v, start_, size_, pad_); };
    }

  private:
    std::vector<std::int64_t> start_, size_;
    PaddingMode pad_;
};

// CenterCrop shrinks axes larger than `size`; SpatialPad grows axes smaller than it.
class CenterResizeT final : public Transform {
  public:
    CenterResizeT(const json &j, bool pad) : pad_(pad) {
        Args a(pad ? "SpatialPad" : "CenterCrop", j);
        size_ = a.ints("size");
        mode_ = pad ? a.pad_mode("pad_mode", "constant") : PaddingMode::Zeros;
        a.finish();
    }
    std::string type() const override { return pad_ ? "SpatialPad" : "CenterCrop"; }
    json args() const override {
        json j{{"size", size_}};
        if (pad_) j["pad_mode"] = std::string(to_string(mode_));
        return j;
    }
    bool invertible() const override { return true; }
    bool spatial() const override { return true; }
    TransformInstance instantiate(Rng &) const override {
        return [this](const MetaVolume &v, bool) {
            auto dims = v.spatial_shape();
            if (size_.size() != dims.size()) throw TransformError(type() + ": size needs one entry per spatial axis");
            for (std::size_t i = 0; i < dims.size(); ++i) {
                if (size_[i] < 1) continue;
                dims[i] = pad_ ? std::max(dims[i], size_[i]) : std::min(dims[i], size_[i]);
            }
            return center_crop_pad(v, dims, mode_);
        };
    }

  private:
    bool pad_;
    std::vector<std::int64_t> size_;
    PaddingMode mode_;
};

class AffineT final : public Transform {
  public:
    explicit AffineT(const json &j) {
        Args a("Affine", j);
        p_.rotation = a.numbers("rotation", std::vector<double>{});
        p_.scale = a.numbers("scale", std::vector<double>{});
        p_.shear = a.numbers("shear", std::vector<double>{});
        p_.translation = a.numbers("translation", std::vector<double>{});
        interp_ = a.interp("zeros");
        a.finish();
    }
    std::string type() const override { return "Affine"; }
    json args() const override {
        json j = interp_json(interp_);
        j["rotation"] = p_.rotation;
        j["scale"] = p_.scale;
        j["shear"] = p_.shear;
        j["translation"] = p_.translation;
        return j;
    }
    bool invertible() const override { return true; }
    bool spatial() const override { return true; }
    TransformInstance instantiate(Rng &) const override {
        return [this](const MetaVolume &v, bool label) { return affine_resample(v, p_, for_key(interp_, label)); };
    }

  private:
    AffineParams p_;
    Interpolation interp_;
};

// ---------------------------------------------------------------- random spatial

class RandFlipT final : public Transform {
  public:
    explicit RandFlipT(const json &j) {
        Args a("RandFlip", j);
        prob_ = a.probability("prob", 0.5);
        for (auto x : a.ints("axes", std::vector<std::int64_t>{0})) axes_.push_back(static_cast<int>(x));
        a.finish();
    }
    std::string type() const override { return "RandFlip"; }
    json args() const override { return {{"prob", prob_}, {"axes", axes_}}; }
    bool random() const override { return true; }
    bool invertible() const override { return true; }
    bool spatial() const override { return true; }
    // Draws: gate.
    TransformInstance instantiate(Rng &rng) const override {
        const bool go = rng.uniform() < prob_;
        return [this, go](const MetaVolume &v, bool) {
            if (!go) return skipped(v, type());
            return relabel(flip(v, axes_), type());
        };
    }

  private:
    double prob_;
    std::vector<int> axes_;
};

class RandRotateT final : public Transform {
  public:
    explicit RandRotateT(const json &j) {
        Args a("RandRotate", j);
        prob_ = a.probability("prob", 0.1);
        range_ = broadcast3(a.numbers("range", std::vector<double>{0.0}), a, "range");
        interp_ = a.interp("zeros");
        a.finish();
    }
    std::string type() const override { return "RandRotate"; }
    json args() const override {
        json j = interp_json(interp_);
        j["prob"] = prob_;
        j["range"] = range_;
        return j;
    }
    bool random() const override { return true; }
    bool invertible() const override { return true; }
    bool spatial() const override { return true; }
    // Draws: gate, three angles (2D volumes use the first).
    TransformInstance instantiate(Rng &rng) const override {
        const bool go = rng.uniform() < prob_;
        std::vector<double> angles(3);
        for (int i = 0; i < 3; ++i) angles[i] = rng.uniform(-range_[i], range_[i]);
        return [this, go, angles](const MetaVolume &v, bool label) {
            if (!go) return skipped(v, type());
            std::vector<double> used = angles;
            if (v.spatial_rank() == 2) used.resize(1);
            return relabel(rotate(v, used, for_key(interp_, label)), type());
        };
    }

  private:
    double prob_;
    std::vector<double> range_;
    Interpolation interp_;
};

class RandZoomT final : public Transform {
  public:
    explicit RandZoomT(const json &j) {
        Args a("RandZoom", j);
        prob_ = a.probability("prob", 0.1);
        min_ = a.number("min_zoom", 0.9);
        max_ = a.number("max_zoom", 1.1);
        interp_ = a.interp("zeros");
        a.finish();
        if (!(min_ > 0 && max_ >= min_)) a.fail("need 0 < min_zoom <= max_zoom");
    }
    std::string type() const override { return "RandZoom"; }
    json args() const override {
        json j = interp_json(interp_);
        j["prob"] = prob_;
        j["min_zoom"] = min_;
        j["max_zoom"] = max_;
        return j;
    }
    bool random() const override { return true; }
    bool invertible() const override { return true; }
    bool spatial() const override { return true; }
    // Draws: gate, one isotropic factor.
    TransformInstance instantiate(Rng &rng) const override {
        const bool go = rng.uniform() < prob_;
        const double f = rng.uniform(min_, max_);
        return [this, go, f](const MetaVolume &v, bool label) {
            if (!go) return skipped(v, type());
            const std::vector<double> fs{f};
            return relabel(zoom(v, fs, for_key(interp_, label)), type());
        };
    }

  private:
    double prob_, min_, max_;
    Interpolation interp_;
};

class RandSpatialCropT final : public Transform {
  public:
    explicit RandSpatialCropT(const json &j) {
        Args a("RandSpatialCrop", j);
        size_ = a.ints("size");
        a.finish();
    }
    std::string type() const override { return "RandSpatialCrop"; }
    json args() const override { return {{"size", size_}}; }
    bool random() const override { return true; }
    bool invertible() const override { return true; }
    bool spatial() const override { return true; }
    // Draws: three offset fractions; always applied.
    TransformInstance instantiate(Rng &rng) const override {
        std::array<double, 3> u{};
        for (auto &x : u) x = rng.uniform();
        return [this, u](const MetaVolume &v, bool) {
            const auto dims = v.spatial_shape();
            if (size_.size() != dims.size()) throw TransformError("RandSpatialCrop: size needs one entry per axis");
            std::vector<std::int64_t> start(dims.size()), size(dims.size());
            for (std::size_t i = 0; i < dims.size(); ++i) {
                size[i] = size_[i] < 1 ? dims[i] : std::min(size_[i], dims[i]);
                const std::int64_t slack = dims[i] - size[i];
                start[i] = std::min<std::int64_t>(slack, static_cast<std::int64_t>(u[i] * static_cast<double>(slack + 1)));
            }
            return relabel(crop_pad(v, start, size, PaddingMode::Zeros), type());
        };
    }

  private:
    std::vector<std::int64_t> size_;
};

class RandAffineT final : public Transform {
  public:
    explicit RandAffineT(const json &j) {
        Args a("RandAffine", j);
        prob_ = a.probability("prob", 0.1);
        rot_ = broadcast3(a.numbers("rotate_range", std::vector<double>{0.0}), a, "rotate_range");
        scale_ = broadcast3(a.numbers("scale_range", std::vector<double>{0.0}), a, "scale_range");
        trans_ = broadcast3(a.numbers("translate_range", std::vector<double>{0.0}), a, "translate_range");
        interp_ = a.interp("zeros");
        a.finish();
    }
    std::string type() const override { return "RandAffine"; }
    json args() const override {
        json j = interp_json(interp_);
        j["prob"] = prob_;
        j["rotate_range"] = rot_;
        j["scale_range"] = scale_;
        j["translate_range"] = trans_;
        return j;
    }
    bool random() const override { return true; }
    bool invertible() const override { return true; }
    bool spatial() const override { return true; }
    // Draws: gate, three angles, three scales, three translations.
    TransformInstance instantiate(Rng &rng) const override {
        const bool go = rng.uniform() < prob_;
        std::vector<double> angles(3), scales(3), shifts(3);
        for (int i = 0; i < 3; ++i) angles[i] = rng.uniform(-rot_[i], rot_[i]);
        for (int i = 0; i < 3; ++i) scales[i] = 1.0 + rng.uniform(-scale_[i], scale_[i]);
        for (int i = 0; i < 3; ++i) shifts[i] = rng.uniform(-trans_[i], trans_[i]);
        return [this, go, angles, scales, shifts](const MetaVolume &v, bool label) {
            if (!go) return skipped(v, type());
            const int rank = v.spatial_rank();
            AffineParams p;
            if (rank == 3) p.rotation = angles;
            if (rank == 2) p.rotation = {angles[0]};
            p.scale.assign(scales.begin(), scales.begin() + rank);
            p.translation.assign(shifts.begin(), shifts.begin() + rank);
            return relabel(affine_resample(v, p, for_key(interp_, label)), type());
        };
    }

  private:
    double prob_;
    std::vector<double> rot_, scale_, trans_;
    Interpolation interp_;
};

class RandElasticT final : public Transform {
  public:
    explicit RandElasticT(const json &j) {
        Args a("RandElastic", j);
        p_.prob = a.probability("prob", 0.1);
        const auto sr = a.numbers("sigma_range", std::vector<double>{5.0, 8.0});
        const auto mr = a.numbers("magnitude_range", std::vector<double>{1.0, 2.0});
        if (sr.size() != 2 || mr.size() != 2) a.fail("ranges need two values");
        p_.sigma_range = {sr[0], sr[1]};
        p_.magnitude_range = {mr[0], mr[1]};
        p_.rotate_range = a.number("rotate_range", 0.05);
        p_.scale_range = a.number("scale_range", 0.05);
        p_.interp = a.interp("border");
        a.finish();
    }
    std::string type() const override { return "RandElastic"; }
    json args() const override {
        json j = interp_json(p_.interp);
        j["prob"] = p_.prob;
        j["sigma_range"] = p_.sigma_range;
        j["magnitude_range"] = p_.magnitude_range;
        j["rotate_range"] = p_.rotate_range;
        j["scale_range"] = p_.scale_range;
        return j;
    }
    bool random() const override { return true; }
    bool invertible() const override { return false; }
    bool spatial() const override { return true; }
    // Draws: see draw_elastic.
    TransformInstance instantiate(Rng &rng) const override {
        const ElasticDraw d = draw_elastic(rng, p_);
        return [this, d](const MetaVolume &v, bool label) { return apply_elastic(v, d, for_key(p_.interp, label)); };
    }

  private:
    ElasticParams p_;
};

// ---------------------------------------------------------------- intensity

class NormalizeT final : public Transform {
  public:
    explicit NormalizeT(const json &j) {
        Args a("NormalizeIntensity", j);
        nonzero_ = a.boolean("nonzero", false);
        a.finish();
    }
    std::string type() const override { return "NormalizeIntensity"; }
    json args() const override { return {{"nonzero", nonzero_}}; }
    bool invertible() const override { return !nonzero_; }
    bool spatial() const override { return false; }
    TransformInstance instantiate(Rng &) const override {
        return [nz = nonzero_](const MetaVolume &v, bool) { return normalize_intensity(v, nz); };
    }

  private:
    bool nonzero_;
};

class ScaleRangeT final : public Transform {
  public:
    explicit ScaleRangeT(const json &j) {
        Args a("ScaleIntensityRange", j);
        a_min_ = a.number("a_min");
        a_max_ = a.number("a_max");
        b_min_ = a.number("b_min", 0.0);
        b_max_ = a.number("b_max", 1.0);
        clip_ = a.boolean("clip", false);
        a.finish();
        if (!(a_max_ > a_min_)) a.fail("a_max must be > a_min");
    }
    std::string type() const override { return "ScaleIntensityRange"; }
    json args() const override {
        return {{"a_min", a_min_}, {"a_max", a_max_}, {"b_min", b_min_}, {"b_max", b_max_}, {"clip", clip_}};
    }
    bool invertible() const override { return !clip_ && b_max_ != b_min_; }
    bool spatial() const override { return false; }
    TransformInstance instantiate(Rng &) const override {
        return [this](const MetaVolume &v, bool) {
            return scale_intensity_range(v, a_min_, a_max_, b_min_, b_max_, clip_);
        };
    }

  private:
    double a_min_, a_max_, b_min_, b_max_;
    bool clip_;
};

class RandNoiseT final : public Transform {
  public:
    explicit RandNoiseT(const json &j) {
        Args a("RandGaussianNoise", j);
        prob_ = a.probability("prob", 0.1);
        mean_ = a.number("mean", 0.0);
        std_ = a.number("std", 0.1);
        a.finish();
        if (std_ < 0) a.fail("std must be >= 0");
    }
    std::string type() const override { return "RandGaussianNoise"; }
    json args() const override { return {{"prob", prob_}, {"mean", mean_}, {"std", std_}}; }
    bool random() const override { return true; }
    bool invertible() const override { return false; }
    bool spatial() const override { return false; }
    // Draws: gate, noise seed.
    TransformInstance instantiate(Rng &rng) const override {
        const NoiseDraw d = draw_gaussian_noise(rng, prob_);
        return [this, d](const MetaVolume &v, bool) { return apply_gaussian_noise(v, d, mean_, std_); };
    }

  private:
    double prob_, mean_, std_;
};

class RandSpikeT final : public Transform {
  public:
    explicit RandSpikeT(const json &j) {
        Args a("RandKSpaceSpike", j);
        p_.prob = a.probability("prob", 0.1);
        const auto g = a.numbers("gain_range", std::vector<double>{0.5, 1.0});
        if (g.size() != 2 || !(g[0] > 0) || g[1] < g[0]) a.fail("gain_range needs two ordered positive values");
        p_.gain_range = {g[0], g[1]};
        p_.count = static_cast<int>(a.number("count", 1));
        a.finish();
        if (p_.count < 1) a.fail("count must be >= 1");
    }
    std::string type() const override { return "RandKSpaceSpike"; }
    json args() const override { return {{"prob", p_.prob}, {"gain_range", p_.gain_range}, {"count", p_.count}}; }
    bool random() const override { return true; }
    bool invertible() const override { return false; }
    bool spatial() const override { return false; }
    // Draws: gate, gain, one location per spike.
    TransformInstance instantiate(Rng &rng) const override {
        const SpikeDraw d = draw_kspace_spike(rng, p_);
        return [d](const MetaVolume &v, bool) { return apply_kspace_spike(v, d); };
    }

  private:
    SpikeParams p_;
};

TransformPtr make_one_of(const json &j) {
    Args a("OneOf", j);
    const json *list = a.raw("transforms");
    if (list == nullptr || !list->is_array()) a.fail("transforms must be a list of {name, args}");
    std::vector<TransformPtr> children;
    for (const auto &c : *list) {
        if (!c.is_object() || !c.contains("name") || !c["name"].is_string()) {
            a.fail("each transform needs a string 'name'");
        }
        children.push_back(make_transform(c["name"].get<std::string>(), c.value("args", json::object())));
    }
    const auto weights = a.numbers("weights", std::vector<double>{});
    a.finish();
    return std::make_shared<OneOf>(std::move(children), weights);
}

using Factory = TransformPtr (*)(const json &);

template <class T>
TransformPtr build(const json &j) {
    return std::make_shared<T>(j);
}

const std::vector<std::pair<std::string, Factory>> &registry() {
    static const std::vector<std::pair<std::string, Factory>> r{
        {"Orientation", &build<OrientationT>},
        {"Spacing", &build<SpacingT>},
        {"Flip", &build<FlipT>},
        {"Rotate", &build<RotateT>},
        {"Zoom", &build<ZoomT>},
        {"CropPad", &build<CropPadT>},
        {"CenterCrop", [](const json &j) -> TransformPtr { return std::make_shared<CenterResizeT>(j, false); }},
        {"SpatialPad", [](const json &j) -> TransformPtr { return std::make_shared<CenterResizeT>(j, true); }},
        {"Affine", &build<AffineT>},
        {"RandFlip", &build<RandFlipT>},
        {"RandRotate", &build<RandRotateT>},
        {"RandZoom", &build<RandZoomT>},
        {"RandSpatialCrop", &build<RandSpatialCropT>},
        {"RandAffine", &build<RandAffineT>},
        {"RandElastic", &build<RandElasticT>},
        {"NormalizeIntensity", &build<NormalizeT>},
        {"ScaleIntensityRange", &build<ScaleRangeT>},
        {"RandGaussianNoise", &build<RandNoiseT>},
        {"RandKSpaceSpike", &build<RandSpikeT>},
        {"OneOf", &make_one_of},
    };
    return r;
}

} // namespace

TransformPtr make_transform(const std::string &name, const json &args) {
    for (const auto &[n, f] : registry()) {
        if (n == name) return f(args);
    }
    throw ConfigError("unknown transform '" + name + "'");
}

std::vector<std::string> builtin_transform_names() {
    std::vector<std::string> out;
    for (const auto &[n, _] : registry()) out.push_back(n);
    return out;
}

} // namespace medvox
