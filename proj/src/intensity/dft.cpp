#include "medvox/dft.hpp"

#include <cmath>
#include <numbers>

#include "medvox/errors.hpp"

namespace medvox {

ComplexVolume::ComplexVolume(std::vector<std::int64_t> dims_) : dims(std::move(dims_)) {
    std::int64_t n = 1;
    for (auto d : dims) n *= d;
    re.assign(static_cast<std::size_t>(n), 0.0);
    im.assign(static_cast<std::size_t>(n), 0.0);
}

namespace {

// In-place 1/sqrt(N) DFT along one axis; sign -1 forward, +1 inverse.
void dft_axis(ComplexVolume &x, int axis, int sign) {
    const std::int64_t n = x.dims[static_cast<std::size_t>(axis)];
    if (n == 1) return;
    std::int64_t inner = 1;
    for (std::size_t a = static_cast<std::size_t>(axis) + 1; a < x.dims.size(); ++a) inner *= x.dims[a];
    const std::int64_t outer = static_cast<std::int64_t>(x.size()) / (n * inner);

    // Twiddles indexed by (k * m) mod n keep the angles exact multiples of 2*pi/n.
    std::vector<double> cs(static_cast<std::size_t>(n)), sn(static_cast<std::size_t>(n));
    for (std::int64_t m = 0; m < n; ++m) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
        cs[m] = std::cos(theta);
        sn[m] = sign * std::sin(theta);
    }
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));

    std::vector<double> in_re(static_cast<std::size_t>(n)), in_im(static_cast<std::size_t>(n));
    for (std::int64_t o = 0; o < outer; ++o) {
        for (std::int64_t i = 0; i < inner; ++i) {
            const std::int64_t base = o * n * inner + i;
            for (std::int64_t m = 0; m < n; ++m) {
                in_re[m] = x.re[static_cast<std::size_t>(base + m * inner)];
                in_im[m] = x.im[static_cast<std::size_t>(base + m * inner)];
            }
            for (std::int64_t k = 0; k < n; ++k) {
                double acc_re = 0.0, acc_im = 0.0;
                std::int64_t t = 0;
                for (std::int64_t m = 0; m < n; ++m) {
                    acc_re += in_re[m] * cs[t] - in_im[m] * sn[t];
                    acc_im += in_re[m] * sn[t] + in_im[m] * cs[t];
                    t += k;
                    if (t >= n) t -= n;
                }
                x.re[static_cast<std::size_t>(base + k * inner)] = acc_re * norm;
                x.im[static_cast<std::size_t>(base + k * inner)] = acc_im * norm;
            }
        }
    }
}

void check_dims(const std::vector<std::int64_t> &dims, std::size_t n) {
    if (dims.empty() || dims.size() > 3) throw TransformError("dft3 needs 1-3 dims");
    std::int64_t p = 1;
    for (auto d : dims) {
        if (d < 1) throw TransformError("dft3 dims must be >= 1");
        p *= d;
    }
    if (static_cast<std::size_t>(p) != n) throw TransformError("dft3 data length does not match dims");
}

ComplexVolume transform(ComplexVolume x, int sign) {
    for (int a = 0; a < static_cast<int>(x.dims.size()); ++a) dft_axis(x, a, sign);
    return x;
}

} // namespace

ComplexVolume dft3(std::span<const double> real, const std::vector<std::int64_t> &dims) {
    check_dims(dims, real.size());
    ComplexVolume x(dims);
    std::copy(real.begin(), real.end(), x.re.begin());
    return transform(std::move(x), -1);
}

ComplexVolume dft3(std::span<const float> real, const std::vector<std::int64_t> &dims) {
    check_dims(dims, real.size());
    ComplexVolume x(dims);
    std::copy(real.begin(), real.end(), x.re.begin());
    return transform(std::move(x), -1);
}

ComplexVolume dft3(const ComplexVolume &x) {
    check_dims(x.dims, x.size());
    return transform(x, -1);
}

ComplexVolume idft3_complex(const ComplexVolume &k) {
    check_dims(k.dims, k.size());
    return transform(k, +1);
}

std::vector<double> idft3(const ComplexVolume &k) { return idft3_complex(k).re; }

std::int64_t conjugate_bin(std::int64_t flat, const std::vector<std::int64_t> &dims) {
    std::vector<std::int64_t> idx(dims.size());
    for (std::size_t a = dims.size(); a-- > 0;) {
        idx[a] = flat % dims[a];
        flat /= dims[a];
    }
    std::int64_t out = 0;
    for (std::size_t a = 0; a < dims.size(); ++a) out = out * dims[a] + (dims[a] - idx[a]) % dims[a];
    return out;
}

} // namespace medvox
