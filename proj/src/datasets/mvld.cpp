#include "medvox/mvld.hpp"

#include <limits>

#include "medvox/byte_io.hpp"
#include "medvox/errors.hpp"
#include "medvox/mvol.hpp"

namespace medvox {

std::vector<std::uint8_t> mvld_encode(const DataDict &dict) {
    if (dict.size() > std::numeric_limits<std::uint16_t>::max()) throw IoError("MVLD: too many entries");
    std::vector<std::uint8_t> out{'M', 'V', 'L', 'D'};
    bytes::put_le<std::uint16_t>(out, static_cast<std::uint16_t>(dict.size()));
    for (const auto &[key, vol] : dict) {
        const auto blob = mvol_encode(vol);
        bytes::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(key.size()));
        out.insert(out.end(), key.begin(), key.end());
        bytes::put_le<std::uint64_t>(out, blob.size());
        out.insert(out.end(), blob.begin(), blob.end());
    }
    return out;
}

DataDict mvld_decode(std::span<const std::uint8_t> data) {
    bytes::Reader r(data);
    const auto magic = r.take(4);
    if (!(magic[0] == 'M' && magic[1] == 'V' && magic[2] == 'L' && magic[3] == 'D')) {
        throw FormatError(FormatErrc::BadMagic, "MVLD: bad magic");
    }
    const auto count = r.get<std::uint16_t>();
    DataDict out;
    for (std::uint16_t i = 0; i < count; ++i) {
        const auto klen = r.get<std::uint32_t>();
        const auto k = r.take(klen);
        std::string key(k.begin(), k.end());
        const auto blen = r.get<std::uint64_t>();
        if (blen > r.remaining()) throw FormatError(FormatErrc::Truncated, "MVLD: truncated entry '" + key + "'");
        MetaVolume v = mvol_decode(r.take(static_cast<std::size_t>(blen)));
        if (!out.emplace(std::move(key), std::move(v)).second) {
            throw FormatError(FormatErrc::Malformed, "MVLD: duplicate key");
        }
    }
    if (r.remaining() != 0) throw FormatError(FormatErrc::Malformed, "MVLD: trailing bytes");
    return out;
}

} // namespace medvox
