#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace ym {

// A point lies outside the set an operation is defined on (outside the
// domain, outside an image closure, outside the support).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Closed interval [lo, hi] of reals; degenerate (lo == hi) allowed.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains_open(double x) const { return x > lo && x < hi; }
    bool contains_closed(double x, double slack = 0.0) const {
        return x >= lo - slack && x <= hi + slack;
    }
};

// The compact support K = [c, d], c < d, that measures live on.
class SupportInterval {
public:
    SupportInterval(double lo, double hi) : lo_(lo), hi_(hi) {
        if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
            throw std::invalid_argument("SupportInterval: requires finite lo < hi");
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double length() const { return hi_ - lo_; }
    Interval as_interval() const { return {lo_, hi_}; }
    bool contains(double y, double slack = 0.0) const {
        return y >= lo_ - slack && y <= hi_ + slack;
    }

private:
    double lo_, hi_;
};

}  // namespace ym
