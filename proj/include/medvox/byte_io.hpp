#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "medvox/errors.hpp"

namespace medvox::bytes {

// Little-endian append helpers.
template <class T>
void put_le(std::vector<std::uint8_t> &out, T value) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t,
                                                    std::conditional_t<sizeof(T) == 2, std::uint16_t, std::uint8_t>>>;
    const U u = std::bit_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
}

// Bounds-checked little-endian cursor; overruns throw FormatError(Truncated).
class Reader {
  public:
    explicit Reader(std::span<const std::uint8_t> buf) : buf_(buf) {}

    template <class T>
    T get() {
        using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                     std::conditional_t<sizeof(T) == 4, std::uint32_t,
                                                        std::conditional_t<sizeof(T) == 2, std::uint16_t, std::uint8_t>>>;
        need(sizeof(T));
        U u = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<U>(static_cast<U>(buf_[pos_ + i]) << (8 * i));
        pos_ += sizeof(T);
        return std::bit_cast<T>(u);
    }

    std::span<const std::uint8_t> take(std::size_t n) {
        need(n);
        auto s = buf_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return buf_.size() - pos_; }

  private:
    void need(std::size_t n) const {
        if (buf_.size() - pos_ < n) throw FormatError(FormatErrc::Truncated, "unexpected end of data");
    }

    std::span<const std::uint8_t> buf_;
    std::size_t pos_ = 0;
};

} // namespace medvox::bytes
