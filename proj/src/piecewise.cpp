#include "ym/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ym {

namespace {

constexpr int kValidationGrid = 257;    // interior points used to certify monotonicity
constexpr double kImageTol = 1e-9;      // onto-condition tolerance
constexpr double kSingularSlopeTol = 1e-9;

// Evaluate near an endpoint, stepping inward when the expression is not
// defined at the endpoint itself (e.g. log(x) at 0).
double eval_toward(const Expr& f, double endpoint, double inward, double width) {
    const double steps[] = {0.0, 1e-12, 1e-9, 1e-6};
    for (double s : steps) {
        try {
            return f.eval(endpoint + inward * s * width);
        } catch (const EvalDomainError&) {
            continue;
        }
    }
    throw EvalDomainError("expression undefined near cell endpoint " + std::to_string(endpoint));
}

double slope_magnitude_at_end(const Expr& deriv, double endpoint, double inward, double width) {
    try {
        return std::abs(eval_toward(deriv, endpoint, inward, width));
    } catch (const EvalDomainError&) {
        // derivative unbounded toward the endpoint: not a vanishing-slope point
        return std::numeric_limits<double>::infinity();
    }
}

// Midpoint bisection needs hundreds of steps to localize roots that sit many
// orders of magnitude below the bracket (x^(1/8) = y near 0); split
// geometrically when the bracket spans a wide dynamic range around zero.
double bisect_point(double a, double b) {
    if (a == 0.0 && b > 0.0) return b / 16.0;
    if (b == 0.0 && a < 0.0) return a / 16.0;
    if (a > 0.0 && b / a > 256.0) return std::sqrt(a * b);
    if (b < 0.0 && a / b > 256.0) return -std::sqrt(a * b);
    return 0.5 * (a + b);
}

}  // namespace

Piece Piece::make(Interval cell, Expr fn) {
    if (!(cell.lo < cell.hi))
        throw std::invalid_argument("Piece: cell endpoints must satisfy lo < hi");
    Piece p;
    p.cell_ = cell;
    p.fn_ = std::move(fn);
    p.deriv_ = differentiate(p.fn_);

    const double w = cell.length();
    int sign = 0;
    bool consistent = true;
    for (int k = 0; k < kValidationGrid && consistent; ++k) {
        const double x = cell.lo + w * (k + 1) / (kValidationGrid + 1);
        double d;
        try {
            d = p.deriv_.eval(x);
        } catch (const EvalDomainError&) {
            consistent = false;
            break;
        }
        const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
        if (s == 0) {
            consistent = false;
        } else if (sign == 0) {
            sign = s;
        } else if (s != sign) {
            consistent = false;
        }
    }

    if (p.fn_.is_constant()) {
        const double c = p.fn_.constant_value();
        p.direction_ = 0;
        p.grid_monotone_ = false;
        p.image_ = {c, c};
        p.endpoint_slope_lo_ = 0.0;
        p.endpoint_slope_hi_ = 0.0;
        return p;
    }

    p.grid_monotone_ = consistent && sign != 0;
    const double u_lo = eval_toward(p.fn_, cell.lo, +1.0, w);
    const double u_hi = eval_toward(p.fn_, cell.hi, -1.0, w);
    p.direction_ = p.grid_monotone_ ? sign : (u_hi > u_lo ? 1 : (u_hi < u_lo ? -1 : 0));
    p.image_ = {std::min(u_lo, u_hi), std::max(u_lo, u_hi)};
    p.endpoint_slope_lo_ = slope_magnitude_at_end(p.deriv_, cell.lo, +1.0, w);
    p.endpoint_slope_hi_ = slope_magnitude_at_end(p.deriv_, cell.hi, -1.0, w);
    return p;
}

Piece Piece::parse(Interval cell, std::string_view source) {
    return make(cell, parse_expression(source));
}

double Piece::invert(double y, double tol) const {
    if (!(tol > 0.0)) throw std::invalid_argument("Piece::invert: tol must be > 0");
    if (is_constant())
        throw InversionError("cannot invert a constant branch");
    if (!grid_monotone_)
        throw InversionError("branch is not strictly monotone on the validation grid");

    const double slack = 1e-9 * std::max(1.0, std::max(std::abs(image_.lo), std::abs(image_.hi)));
    if (y < image_.lo - slack || y > image_.hi + slack)
        throw DomainError("invert: value " + std::to_string(y) + " outside branch image [" +
                          std::to_string(image_.lo) + ", " + std::to_string(image_.hi) + "]");
    y = std::clamp(y, image_.lo, image_.hi);

    // bracket [xa, xb] with fn(xa) <= y <= fn(xb) in direction terms
    double xa = cell_.lo, xb = cell_.hi;
    const double target_tol = tol * std::max(1.0, std::abs(y));
    const double eps = std::numeric_limits<double>::epsilon();
    const double cell_scale = std::max(std::abs(cell_.lo), std::abs(cell_.hi));

    // the residual alone can leave x badly placed where the slope is small,
    // so the bracket must also shrink to relative x accuracy
    auto x_converged = [&] {
        const double width = xb - xa;
        return width <= 1e-10 * std::max(std::abs(xa), std::abs(xb)) + 1e-300 ||
               width <= 4.0 * eps * cell_scale;
    };
    auto residual = [&](double x) { return fn_.eval(x) - y; };

    double x = 0.5 * (xa + xb);
    for (int iter = 0; iter < 200; ++iter) {
        const double r = residual(x);
        if (r == 0.0) return x;

        // shrink the bracket using the sign of the residual
        if ((r > 0.0) == (direction_ > 0)) xb = x; else xa = x;
        if (std::abs(r) <= target_tol && x_converged()) return x;

        double step_x = std::numeric_limits<double>::quiet_NaN();
        try {
            const double d = deriv_.eval(x);
            if (d != 0.0) step_x = x - r / d;
        } catch (const EvalDomainError&) {
        }
        if (std::isfinite(step_x) && step_x > xa && step_x < xb) {
            x = step_x;
        } else {
            x = bisect_point(xa, xb);
        }

        const double width = xb - xa;
        if (width <= 2.0 * eps * std::max(std::abs(xa), std::abs(xb)) + 1e-300) {
            const double rr = residual(x);
            if (std::abs(rr) <= target_tol) return x;
            // the bracket is one ulp wide: x is the best representable
            // preimage. Accept the residual when the local slope explains it
            // (steep branch ends); a larger residual means a jump.
            double local_slope = std::numeric_limits<double>::infinity();
            try {
                local_slope = std::abs(deriv_.eval(x));
            } catch (const EvalDomainError&) {
            }
            if (std::abs(rr) <= 8.0 * local_slope * width + target_tol) return x;
            throw InversionError("bracket collapsed before reaching tolerance; residual " +
                                 std::to_string(rr));
        }
    }
    {
        const double rr = residual(x);
        if (std::abs(rr) <= target_tol) return x;  // x accuracy capped by the 200-iter budget
    }
    throw InversionError("no convergence within 200 iterations (target " +
                         std::to_string(y) + ")");
}

double Piece::inverse_slope_magnitude(double y, double tol) const {
    const double x = invert(y, tol);
    double d;
    try {
        d = deriv_.eval(x);
    } catch (const EvalDomainError&) {
        return 0.0;  // unbounded slope => inverse derivative 0
    }
    return 1.0 / std::abs(d);  // +inf at vanishing-slope points
}

std::vector<double> Piece::singular_image_endpoints() const {
    std::vector<double> out;
    if (is_constant()) return out;
    const double u_lo = eval_toward(fn_, cell_.lo, +1.0, cell_.length());
    const double u_hi = eval_toward(fn_, cell_.hi, -1.0, cell_.length());
    if (endpoint_slope_lo_ < kSingularSlopeTol) out.push_back(u_lo);
    if (endpoint_slope_hi_ < kSingularSlopeTol) out.push_back(u_hi);
    return out;
}

PartitionedFunction::PartitionedFunction(Interval domain, FunctionKind kind,
                                         std::vector<Piece> pieces)
    : domain_(domain), kind_(kind), pieces_(std::move(pieces)) {
    if (!(domain_.lo < domain_.hi))
        throw std::invalid_argument("PartitionedFunction: domain must satisfy lo < hi");
    if (pieces_.empty())
        throw std::invalid_argument("PartitionedFunction: at least one piece required");
    std::sort(pieces_.begin(), pieces_.end(),
              [](const Piece& a, const Piece& b) { return a.cell().lo < b.cell().lo; });
}

std::vector<double> PartitionedFunction::knots() const {
    std::vector<double> k;
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) k.push_back(pieces_[i].cell().hi);
    return k;
}

const Piece* PartitionedFunction::piece_containing(double x) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](double v, const Piece& p) { return v < p.cell().lo; });
    if (it == pieces_.begin()) return nullptr;
    --it;
    return it->cell().contains_open(x) ? &*it : nullptr;
}

double PartitionedFunction::operator()(double x) const {
    if (!(x > domain_.lo && x < domain_.hi))
        throw DomainError("evaluate: point " + std::to_string(x) + " outside the domain (" +
                          std::to_string(domain_.lo) + ", " + std::to_string(domain_.hi) + ")");
    const Piece* p = piece_containing(x);
    if (!p)
        throw DomainError("evaluate: point " + std::to_string(x) +
                          " lies on a partition knot (callers must use interior points)");
    return (*p)(x);
}

bool ValidationReport::ok() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const ValidationEntry& e) { return e.pass; });
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (const auto& e : entries)
        if (!e.pass) os << e.condition << ": " << e.detail << "\n";
    return os.str();
}

ValidationError::ValidationError(const ValidationReport& report)
    : std::runtime_error("validation failed:\n" + report.summary()), report_(report) {}

ValidationReport validate(const PartitionedFunction& u,
                          const std::optional<SupportInterval>& onto) {
    ValidationReport rep;
    const auto pieces = u.pieces();
    const double span = u.domain().length();
    const double knot_tol = 1e-12 * std::max(1.0, span);

    {
        ValidationEntry e{"domain-positive-measure", span > 0.0,
                          "M = " + std::to_string(span)};
        rep.entries.push_back(e);
    }

    // cells pairwise disjoint, ordered, and covering [a, b]
    {
        bool pass = true;
        std::ostringstream detail;
        if (std::abs(pieces.front().cell().lo - u.domain().lo) > knot_tol) {
            pass = false;
            detail << "first cell starts at " << pieces.front().cell().lo
                   << ", domain starts at " << u.domain().lo << "; ";
        }
        if (std::abs(pieces.back().cell().hi - u.domain().hi) > knot_tol) {
            pass = false;
            detail << "last cell ends at " << pieces.back().cell().hi
                   << ", domain ends at " << u.domain().hi << "; ";
        }
        for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
            const double r = pieces[i].cell().hi;
            const double l = pieces[i + 1].cell().lo;
            if (r > l + knot_tol) {
                pass = false;
                detail << "cells " << i << " and " << i + 1 << " overlap on ["
                       << l << ", " << r << "]; ";
            } else if (r < l - knot_tol) {
                pass = false;
                detail << "gap between cells " << i << " and " << i + 1 << " on ["
                       << r << ", " << l << "]; ";
            }
        }
        rep.entries.push_back({"partition-disjoint-covering", pass,
                               pass ? "cells tile the domain" : detail.str()});
    }

    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const Piece& p = pieces[i];
        const std::string tag = "piece[" + std::to_string(i) + "]";
        if (u.kind() == FunctionKind::PiecewiseConstant) {
            rep.entries.push_back({tag + "-constant-expression", p.is_constant(),
                                   p.is_constant() ? "constant" :
                                   "branch is not a constant expression"});
        } else {
            rep.entries.push_back({tag + "-strict-monotonicity", p.grid_monotone(),
                                   p.grid_monotone()
                                       ? (p.direction() > 0 ? "increasing" : "decreasing")
                                       : "derivative changes sign or vanishes on the grid"});
            if (onto) {
                const bool img_ok =
                    std::abs(p.image().lo - onto->lo()) <= kImageTol &&
                    std::abs(p.image().hi - onto->hi()) <= kImageTol;
                std::ostringstream d;
                d << "image [" << p.image().lo << ", " << p.image().hi << "] vs K ["
                  << onto->lo() << ", " << onto->hi() << "]";
                rep.entries.push_back({tag + "-image-onto", img_ok, d.str()});
            }
        }
    }
    return rep;
}

}  // namespace ym
