#include "medvox/mvol.hpp"

#include <istream>
#include <iterator>
#include <ostream>

#include "medvox/byte_io.hpp"
#include "medvox/errors.hpp"
#include "medvox/meta_json.hpp"

namespace medvox {

std::vector<std::uint8_t> mvol_encode(const MetaVolume &v) {
    v.validate();
    std::vector<std::uint8_t> out;
    const std::string json_blob =
        nlohmann::json{{"meta", meta_to_json(v.meta)}, {"applied", trace_stack_to_json(v.applied)}}.dump();
    out.reserve(8 + 8 * v.shape.size() + 128 + 4 + json_blob.size() + 4 * v.data.size());

    out.insert(out.end(), {'M', 'V', 'O', 'L'});
    out.push_back(kMvolVersion);
    out.push_back(kMvolDtypeF32);
    out.push_back(static_cast<std::uint8_t>(v.shape.size()));
    out.push_back(0);
    for (auto d : v.shape) bytes::put_le(out, static_cast<std::uint64_t>(d));
    for (double a : v.affine.m) bytes::put_le(out, a);
    bytes::put_le(out, static_cast<std::uint32_t>(json_blob.size()));
    out.insert(out.end(), json_blob.begin(), json_blob.end());
    for (float f : v.data) bytes::put_le(out, f);
    return out;
}

MetaVolume mvol_decode(std::span<const std::uint8_t> buf) {
    bytes::Reader r(buf);
    const auto magic = r.take(4);
    if (!(magic[0] == 'M' && magic[1] == 'V' && magic[2] == 'O' && magic[3] == 'L')) {
        throw FormatError(FormatErrc::BadMagic, "not an MVOL container");
    }
    const auto version = r.get<std::uint8_t>();
    if (version != kMvolVersion) {
        throw FormatError(FormatErrc::UnsupportedVersion, "unsupported MVOL version " + std::to_string(version));
    }
    const auto dtype = r.get<std::uint8_t>();
    if (dtype != kMvolDtypeF32) {
        throw FormatError(FormatErrc::UnsupportedDtype, "unsupported MVOL dtype " + std::to_string(dtype));
    }
    const auto ndim = r.get<std::uint8_t>();
    r.get<std::uint8_t>();
    if (ndim < 2 || ndim > 4) throw FormatError(FormatErrc::Malformed, "MVOL ndim must be 2..4");

    MetaVolume v;
    std::uint64_t count = 1;
    for (int i = 0; i < ndim; ++i) {
        const auto d = r.get<std::uint64_t>();
        if (d == 0 || d > (1ULL << 40)) throw FormatError(FormatErrc::Malformed, "bad MVOL dimension");
        v.shape.push_back(static_cast<std::int64_t>(d));
        count *= d;
    }
    for (auto &a : v.affine.m) a = r.get<double>();

    const auto json_len = r.get<std::uint32_t>();
    const auto blob = r.take(json_len);
    try {
        const auto j = nlohmann::json::parse(blob.begin(), blob.end());
        v.meta = meta_from_json(j.at("meta"));
        v.applied = trace_stack_from_json(j.at("applied"));
    } catch (const nlohmann::json::exception &e) {
        throw FormatError(FormatErrc::Malformed, std::string("bad MVOL metadata: ") + e.what());
    }

    if (r.remaining() < count * 4) throw FormatError(FormatErrc::Truncated, "MVOL data section truncated");
    v.data.resize(count);
    for (auto &f : v.data) f = r.get<float>();
    try {
        v.validate();
    } catch (const TransformError &e) {
        throw FormatError(FormatErrc::Malformed, std::string("invalid MVOL volume: ") + e.what());
    }
    return v;
}

std::size_t mvol_write(const MetaVolume &v, std::ostream &sink) {
    const auto bytes = mvol_encode(v);
    sink.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!sink) throw IoError("failed writing MVOL stream");
    return bytes.size();
}

MetaVolume mvol_read(std::istream &source) {
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(source)), std::istreambuf_iterator<char>());
    return mvol_decode(buf);
}

} // namespace medvox
