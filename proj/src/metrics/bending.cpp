#include <array>

#include "medvox/errors.hpp"
#include "medvox/metrics.hpp"

namespace medvox {

double bending_energy(const DisplacementField &field) {
    const int rank = field.rank();
    if (rank < 1 || rank > 3) throw ConfigError("bending_energy: field rank must be 1 to 3");
    if (field.data.size() != static_cast<std::size_t>(rank * field.voxels())) {
        throw ConfigError("bending_energy: field data does not match its dims");
    }
    std::array<std::int64_t, 3> d{1, 1, 1}, stride{};
    for (int a = 0; a < rank; ++a) {
        if (field.dims[a] < 3) throw ConfigError("bending_energy: every dim must be >= 3");
        d[a] = field.dims[a];
    }
    stride[2] = 1;
    stride[1] = d[2];
    stride[0] = d[1] * d[2];

    const std::int64_t lo0 = 1, lo1 = rank > 1 ? 1 : 0, lo2 = rank > 2 ? 1 : 0;
    const std::int64_t hi0 = d[0] - 1, hi1 = rank > 1 ? d[1] - 1 : 1, hi2 = rank > 2 ? d[2] - 1 : 1;

    double total = 0.0;
    std::int64_t count = 0;
    for (std::int64_t i = lo0; i < hi0; ++i) {
        for (std::int64_t j = lo1; j < hi1; ++j) {
            for (std::int64_t k = lo2; k < hi2; ++k) {
                const std::int64_t at = i * stride[0] + j * stride[1] + k * stride[2];
                double e = 0.0;
                for (int c = 0; c < rank; ++c) {
                    const double *u = field.component(c);
                    for (int a = 0; a < rank; ++a) {
                        const double daa = u[at + stride[a]] - 2.0 * u[at] + u[at - stride[a]];
                        e += daa * daa;
                        for (int b = a + 1; b < rank; ++b) {
                            const double dab = (u[at + stride[a] + stride[b]] - u[at + stride[a] - stride[b]] -
                                                u[at - stride[a] + stride[b]] + u[at - stride[a] - stride[b]]) /
                                               4.0;
                            e += 2.0 * dab * dab;
                        }
                    }
                }
                total += e;
                ++count;
            }
        }
    }
    return total / static_cast<double>(count);
}

} // namespace medvox
