#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ym/expr.hpp"
#include "ym/interval.hpp"

namespace ym {

class InversionError : public std::runtime_error {
public:
    explicit InversionError(const std::string& what) : std::runtime_error(what) {}
};

enum class FunctionKind { PiecewiseConstant, PiecewiseInvertible };

// One cell of the partition together with the branch defined on it.
// Construction caches the symbolic derivative, the monotonicity direction
// (sign of the derivative on an interior grid; 0 for constant branches) and
// the closure of the branch image.
class Piece {
public:
    static Piece make(Interval cell, Expr fn);
    static Piece parse(Interval cell, std::string_view source);

    const Interval& cell() const { return cell_; }
    const Expr& fn() const { return fn_; }
    const Expr& derivative() const { return deriv_; }
    int direction() const { return direction_; }          // +1, -1, or 0
    const Interval& image() const { return image_; }       // closure of fn(cell)
    bool grid_monotone() const { return grid_monotone_; }  // derivative sign constant & nonzero
    bool is_constant() const { return direction_ == 0; }

    double operator()(double x) const { return fn_.eval(x); }
    double slope(double x) const { return deriv_.eval(x); }

    // Solves fn(x) = y on the cell closure by bisection-safeguarded Newton.
    // Stops at |fn(x) - y| <= tol * max(1, |y|); throws DomainError when y is
    // outside the image closure and InversionError past 200 iterations.
    double invert(double y, double tol = 1e-12) const;

    // |d/dy fn^{-1}(y)| = 1 / |fn'(fn^{-1}(y))|. +inf where the slope
    // vanishes, which validated pieces can only exhibit at image endpoints.
    double inverse_slope_magnitude(double y, double tol = 1e-12) const;

    // Image endpoints where the slope tends to zero, i.e. where the
    // inverse-derivative density blows up (integrably).
    std::vector<double> singular_image_endpoints() const;

private:
    Interval cell_;
    Expr fn_;
    Expr deriv_;
    int direction_ = 0;
    Interval image_{};
    bool grid_monotone_ = false;
    double endpoint_slope_lo_ = 0.0;  // |fn'| at cell.lo (inf if unbounded)
    double endpoint_slope_hi_ = 0.0;
};

// u = sum of branches over an interval partition of (a, b).
class PartitionedFunction {
public:
    PartitionedFunction(Interval domain, FunctionKind kind, std::vector<Piece> pieces);

    const Interval& domain() const { return domain_; }
    double domain_measure() const { return domain_.length(); }  // M = b - a
    FunctionKind kind() const { return kind_; }
    std::span<const Piece> pieces() const { return pieces_; }

    // Interior partition knots (shared cell endpoints), ascending.
    std::vector<double> knots() const;

    // Evaluates at an interior point of some cell. Throws DomainError when x
    // is outside the domain or sits exactly on a partition knot.
    double operator()(double x) const;

    // The piece whose open cell contains x, or nullptr.
    const Piece* piece_containing(double x) const;

private:
    Interval domain_;
    FunctionKind kind_;
    std::vector<Piece> pieces_;  // sorted by cell.lo
};

struct ValidationEntry {
    std::string condition;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationEntry> entries;

    bool ok() const;
    std::string summary() const;  // one line per failed entry
};

// Structural checks: cells pairwise disjoint and covering the domain closure,
// strict monotonicity of every branch on a >= 257-point interior grid
// (invertible kind), constancy of every branch (constant kind), and -- when
// onto is supplied -- each branch image closure equal to onto within 1e-9.
// All failures are report entries; nothing throws.
ValidationReport validate(const PartitionedFunction& u,
                          const std::optional<SupportInterval>& onto = std::nullopt);

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const ValidationReport& report);
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

}  // namespace ym
