#include "ym/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace ym {

EmpiricalSample monte_carlo_pushforward(const PartitionedFunction& u, std::size_t n,
                                        std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("monte_carlo_pushforward: n must be >= 1");
    const ValidationReport rep = validate(u);
    if (!rep.ok()) throw ValidationError(rep);

    std::mt19937_64 rng(seed);
    const double a = u.domain().lo;
    const double w = u.domain_measure();

    EmpiricalSample sample;
    sample.seed = seed;
    sample.values.reserve(n);
    while (sample.values.size() < n) {
        const double t = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
        const double x = a + w * t;
        const Piece* p = u.piece_containing(x);
        if (!p) continue;  // landed on a knot or the left edge; measure-zero, redraw
        sample.values.push_back((*p)(x));
    }
    std::sort(sample.values.begin(), sample.values.end());
    return sample;
}

double ks_distance(const EmpiricalSample& sample, const HomogeneousYoungMeasure& nu) {
    if (sample.values.empty())
        throw std::invalid_argument("ks_distance: sample is empty");

    const auto& v = sample.values;
    const double n = static_cast<double>(v.size());
    const double c = nu.support().lo(), d = nu.support().hi();

    const bool continuous = nu.variant() != HomogeneousYoungMeasure::Variant::Atomic &&
                            nu.variant() != HomogeneousYoungMeasure::Variant::Stieltjes;
    auto cdf_at = [&](double y) {
        y = std::clamp(y, c, d);
        return continuous ? nu.cdf_interpolated(y) : nu.cdf(y);
    };
    auto cdf_left = [&](double y) {
        y = std::clamp(y, c, d);
        return continuous ? nu.cdf_interpolated(y) : nu.cdf_left_limit(y);
    };

    // sup over the sample points, comparing both sides of every jump of the
    // empirical CDF (ties grouped so F_n jumps by the tie count)
    double dist = 0.0;
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        const double f_right = cdf_at(v[i]);
        const double f_left = cdf_left(v[i]);
        dist = std::max({dist, std::abs(f_right - static_cast<double>(j) / n),
                         std::abs(f_left - static_cast<double>(i) / n)});
        i = j;
    }

    // jumps of the measure CDF between consecutive samples also carry sup
    // candidates; scan the atom locations
    if (nu.variant() == HomogeneousYoungMeasure::Variant::Atomic) {
        for (const Atom& at : nu.atoms()) {
            const double below =
                static_cast<double>(std::lower_bound(v.begin(), v.end(), at.point) - v.begin());
            const double at_or_below =
                static_cast<double>(std::upper_bound(v.begin(), v.end(), at.point) - v.begin());
            dist = std::max({dist, std::abs(nu.cdf(at.point) - at_or_below / n),
                             std::abs(nu.cdf_left_limit(at.point) - below / n)});
        }
    }
    return std::min(dist, 1.0);
}

void write_sample_csv(const EmpiricalSample& sample, const std::filesystem::path& path) {
    std::FILE* f = std::fopen(path.string().c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    std::fputs("value\n", f);
    for (double v : sample.values) std::fprintf(f, "%.17g\n", v);
    std::fclose(f);
}

}  // namespace ym
