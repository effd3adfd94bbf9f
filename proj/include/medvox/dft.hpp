#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace medvox {

// Complex array over 1-3 spatial dims, last axis fastest.
struct ComplexVolume {
    std::vector<std::int64_t> dims;
    std::vector<double> re;
    std::vector<double> im;

    ComplexVolume() = default;
    explicit ComplexVolume(std::vector<std::int64_t> dims_);
    std::size_t size() const { return re.size(); }
};

// Separable naive DFT, 1/sqrt(N) per axis, so forward and inverse are unitary.
ComplexVolume dft3(std::span<const double> real, const std::vector<std::int64_t> &dims);
ComplexVolume dft3(std::span<const float> real, const std::vector<std::int64_t> &dims);
ComplexVolume dft3(const ComplexVolume &x);
ComplexVolume idft3_complex(const ComplexVolume &k);
// Real part of the inverse transform.
std::vector<double> idft3(const ComplexVolume &k);

// Flat index of the bin holding the conjugate partner of `flat` ((-k) mod D per axis).
std::int64_t conjugate_bin(std::int64_t flat, const std::vector<std::int64_t> &dims);

} // namespace medvox
