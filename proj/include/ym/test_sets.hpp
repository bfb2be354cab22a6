#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ym/interval.hpp"

namespace ym {

// A finite union of pairwise-disjoint closed subintervals of K.
struct BorelTestSet {
    std::vector<Interval> components;
    std::string label;

    double total_length() const {
        double s = 0.0;
        for (const auto& c : components) s += c.length();
        return s;
    }

    static BorelTestSet interval(double lo, double hi, std::string label = "");
};

// Finite surrogate for "all Borel sets": every dyadic subinterval of K down
// to `depth`, plus a fixed collection of eight two-component unions.
struct TestSetFamily {
    SupportInterval support;
    std::size_t depth = 0;
    std::vector<BorelTestSet> sets;
};

TestSetFamily generate_test_sets(const SupportInterval& K, std::size_t depth);

}  // namespace ym
