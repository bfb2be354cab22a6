#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ym/measure.hpp"
#include "ym/piecewise.hpp"

namespace ym {

// Sorted sample of u(X) for X uniform on the domain, drawn from a seeded
// mt19937_64. Bit-for-bit reproducible for a fixed (u, n, seed): uniforms are
// built from the raw 64-bit engine output ((r >> 11) * 2^-53) rather than
// through std::uniform_real_distribution, whose output is not pinned by the
// standard.
struct EmpiricalSample {
    std::vector<double> values;  // ascending
    std::uint64_t seed = 0;

    std::size_t size() const { return values.size(); }
};

EmpiricalSample monte_carlo_pushforward(const PartitionedFunction& u, std::size_t n,
                                        std::uint64_t seed);

// Two-sided Kolmogorov-Smirnov statistic between the empirical CDF of the
// sample and the measure's CDF: sup over the sample points (and over the
// atom locations, where the CDF jumps) of |F_n - F|. Absolutely continuous
// measures are scanned through their interpolated CDF table; the
// interpolation error is orders of magnitude below sampling noise.
double ks_distance(const EmpiricalSample& sample, const HomogeneousYoungMeasure& nu);

// Single-column CSV ("value" header), one sample per row.
void write_sample_csv(const EmpiricalSample& sample, const std::filesystem::path& path);

}  // namespace ym
