#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace ym {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;  // <= requested tolerance on success
    std::size_t subdivisions = 0;
    std::size_t evaluations = 0;
};

class QuadratureError : public std::runtime_error {
public:
    explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive Gauss-Kronrod (G7,K15) integration of f over [lo, hi].
//
// Worst-interval-first refinement until the summed error estimate drops
// below tol (absolute). All nodes are interior, so f is never evaluated at
// interval endpoints; intervals adjacent to a declared singular endpoint are
// split geometrically toward the singularity instead of at the midpoint,
// which makes integrable endpoint blow-ups (1/sqrt type) converge in a few
// dozen levels. Throws QuadratureError on a non-finite sample or when the
// evaluation budget is exhausted before reaching tol.
//
// Attainable accuracy next to a singular endpoint s is bounded by the grid
// of representable doubles there: roughly sqrt(ulp(s)) for 1/sqrt blow-ups.
// A singularity at 0 resolves to full precision; one at s = O(1) bottoms
// out near 1e-8.
QuadratureResult adaptive_quadrature(const std::function<double(double)>& f,
                                     double lo, double hi, double tol,
                                     std::span<const double> singular_endpoints = {},
                                     std::size_t max_evaluations = 1'000'000);

}  // namespace ym
