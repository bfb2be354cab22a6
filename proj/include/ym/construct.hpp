#pragma once

#include <span>
#include <string>
#include <vector>

#include "ym/measure.hpp"
#include "ym/piecewise.hpp"

namespace ym {

// Young measure of a piecewise-constant function: one atom per distinct
// branch value c_i with weight |cell_i| / M; equal atoms merge by summing
// weights. Throws ValidationError when u fails validation.
HomogeneousYoungMeasure atomic_young_measure(const PartitionedFunction& u,
                                             const SupportInterval& K);

// Young measure of a piecewise-invertible function via the inverse-derivative
// density g(y) = (1/M) * sum_i 1/|u_i'(u_i^{-1}(y))|. Every branch must map
// its cell onto K (checked); vanishing-slope image endpoints are collected as
// the density's singular endpoints.
HomogeneousYoungMeasure density_young_measure(const PartitionedFunction& u,
                                              const SupportInterval& K);

// Young measure as the image of the normalized Lebesgue measure on the
// domain: F(y) = (1/M) * sum_i lambda({x in cell_i : u_i(x) <= y}), each
// preimage resolved analytically from branch monotonicity. Works for both
// kinds.
HomogeneousYoungMeasure pushforward_young_measure(const PartitionedFunction& u,
                                                  const SupportInterval& K);

// Single strictly increasing branch: the measure is the Lebesgue-Stieltjes
// measure of F(y) = (u^{-1}(y) - a) / M on K = closure(u(domain)).
HomogeneousYoungMeasure stieltjes_from_monotone(const PartitionedFunction& u);

// Every representation that applies to u, natural one first:
// invertible -> {density, pushforward}, constant -> {atomic, pushforward}.
std::vector<HomogeneousYoungMeasure> build_representations(const PartitionedFunction& u,
                                                           const SupportInterval& K);

struct IdentityCheck {
    std::string beta_label;
    double lhs = 0.0;       // integral of beta against the measure
    double rhs = 0.0;       // mean of beta(u(x)) over the domain
    double abs_diff = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string error;      // quadrature/eval failure, if any
};

struct IdentityReport {
    std::vector<IdentityCheck> checks;
    bool ok() const;
};

// Checks, for every beta, that the measure reproduces the mean of beta
// composed with u: the left side is integrate(nu, beta), the right side is
// adaptive quadrature of beta(u(x)) over the domain split at the partition
// knots, normalized by 1/M. A failing beta is recorded and the remaining
// betas still run.
IdentityReport verify_fundamental_identity(const PartitionedFunction& u,
                                           const HomogeneousYoungMeasure& nu,
                                           std::span<const TestFunction> betas,
                                           double tol = 1e-7);

struct CrossPair {
    std::string rep_a, rep_b;
    double sup_discrepancy = 0.0;
    double at_y = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct CrossReport {
    std::vector<CrossPair> pairs;
    std::size_t grid_points = 0;
    bool ok() const;
};

// Builds every applicable representation and compares their CDFs pairwise on
// a uniform grid over K; pass iff the sup-norm discrepancy stays within tol.
CrossReport cross_validate(const PartitionedFunction& u, const SupportInterval& K,
                           double tol = 1e-9, std::size_t grid_points = 1025);

}  // namespace ym
