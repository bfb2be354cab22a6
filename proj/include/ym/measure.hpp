#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ym/expr.hpp"
#include "ym/interval.hpp"
#include "ym/test_sets.hpp"

namespace ym {

// A continuous test function beta on K, usually parsed from a source string
// over the variable y.
struct TestFunction {
    Expr ast;
    std::string label;

    double operator()(double y) const { return ast.eval(y); }

    static TestFunction from_source(std::string_view source);
    static TestFunction from_source(std::string_view source, std::string label);
};

// {1, y, y^2, sin(y), exp(y)}
std::vector<TestFunction> default_test_suite();

struct Atom {
    double point;
    double weight;
};

// A homogeneous Young measure: one probability measure on K answers every
// query, with no dependence on the domain point. Three concrete
// representations are supported:
//
//   Atomic     finite combination of Dirac atoms,
//   AbsCont    density g against Lebesgue measure on K (g may blow up at
//              finitely many declared singular endpoints),
//   Stieltjes  nondecreasing F on K where F(y) is the measure of [c, y];
//              mass sitting exactly at c is part of F(c), and interior
//              set boundaries follow the half-open F(hi) - F(lo) rule.
//
// Instances are immutable and cheap to copy; all queries are const and safe
// to run concurrently.
class HomogeneousYoungMeasure {
public:
    enum class Variant { Atomic, AbsCont, Stieltjes };

    static HomogeneousYoungMeasure atomic(SupportInterval support, std::vector<Atom> atoms);
    static HomogeneousYoungMeasure absolutely_continuous(
        SupportInterval support, std::function<double(double)> density,
        std::vector<double> singular_endpoints = {});
    static HomogeneousYoungMeasure stieltjes(SupportInterval support,
                                             std::function<double(double)> cdf);

    Variant variant() const { return variant_; }
    const char* variant_name() const;
    const SupportInterval& support() const { return support_; }

    const std::vector<Atom>& atoms() const;                   // Atomic only
    double density_at(double y) const;                        // AbsCont only
    std::span<const double> singular_endpoints() const;       // empty unless AbsCont

    // integral of beta against the measure: exact atom sum / adaptive
    // quadrature of beta*g / Riemann-Stieltjes sum refined to tol.
    double integrate(const TestFunction& beta, double tol = 1e-9) const;

    // measure of a finite union of closed intervals inside K; atoms on a
    // component endpoint count as inside.
    double measure_of_set(const BorelTestSet& a, double tol = 1e-9) const;

    // measure of [c, y].
    double cdf(double y) const;

    // limit of the CDF from the left: cdf(y) minus any atom at y. Used by
    // sup-norm statistics that must compare step functions on both sides of
    // a jump.
    double cdf_left_limit(double y) const;

    // integrate(1). Equals 1 within tol for a valid Young measure; callers
    // use it as the normalization check.
    double total_mass(double tol = 1e-9) const;

    // Piecewise-linear interpolation of the CDF on a precomputed grid that
    // is refined geometrically toward singular endpoints. Meant for bulk
    // statistics (KS scans); error is far below sampling noise but above
    // the 1e-12-grade accuracy of cdf().
    double cdf_interpolated(double y) const;

private:
    struct AtomicRep {
        std::vector<Atom> atoms;  // ascending by point
    };
    struct CdfTable;  // anchors + cumulative integrals, built lazily
    struct AbsContRep {
        std::function<double(double)> density;
        std::vector<double> singular_endpoints;
        std::shared_ptr<CdfTable> table;  // shared so copies reuse the cache
    };
    struct StieltjesRep {
        std::function<double(double)> cdf;
    };

    HomogeneousYoungMeasure(SupportInterval s, Variant v)
        : support_(s), variant_(v) {}

    const CdfTable& table() const;

    SupportInterval support_;
    Variant variant_;
    std::variant<AtomicRep, AbsContRep, StieltjesRep> rep_{AtomicRep{}};
};

}  // namespace ym
