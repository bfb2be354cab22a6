#include "ym/measure.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "ym/quadrature.hpp"

namespace ym {

namespace {

constexpr std::size_t kUniformSegments = 2048;
constexpr double kGeometricFloor = 1e-13;  // relative width where endpoint refinement stops

bool near_point(double a, double b, double scale) {
    return std::abs(a - b) <= 1e-12 * std::max(1.0, scale);
}

}  // namespace

TestFunction TestFunction::from_source(std::string_view source) {
    return from_source(source, std::string(source));
}

TestFunction TestFunction::from_source(std::string_view source, std::string label) {
    return TestFunction{parse_expression(source, "y"), std::move(label)};
}

std::vector<TestFunction> default_test_suite() {
    std::vector<TestFunction> suite;
    suite.push_back(TestFunction{Expr::constant(1.0), "1"});
    suite.push_back(TestFunction::from_source("y"));
    suite.push_back(TestFunction::from_source("y^2"));
    suite.push_back(TestFunction::from_source("sin(y)"));
    suite.push_back(TestFunction::from_source("exp(y)"));
    return suite;
}

// ---------------------------------------------------------------------------

struct HomogeneousYoungMeasure::CdfTable {
    std::once_flag once;
    std::vector<double> y;    // anchors, ascending, y.front() = c, y.back() = d
    std::vector<double> cum;  // cum[i] = integral of g over [c, y[i]]
};

HomogeneousYoungMeasure HomogeneousYoungMeasure::atomic(SupportInterval support,
                                                        std::vector<Atom> atoms) {
    if (atoms.empty())
        throw std::invalid_argument("atomic measure: at least one atom required");
    const double scale = std::max(std::abs(support.lo()), std::abs(support.hi()));
    for (const Atom& a : atoms) {
        if (!(a.weight > 0.0))
            throw std::invalid_argument("atomic measure: weights must be positive");
        if (!support.contains(a.point, 1e-12 * std::max(1.0, scale)))
            throw std::invalid_argument("atomic measure: atom " + std::to_string(a.point) +
                                        " outside the support");
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.point < b.point; });
    HomogeneousYoungMeasure m(support, Variant::Atomic);
    m.rep_ = AtomicRep{std::move(atoms)};
    return m;
}

HomogeneousYoungMeasure HomogeneousYoungMeasure::absolutely_continuous(
    SupportInterval support, std::function<double(double)> density,
    std::vector<double> singular_endpoints) {
    if (!density)
        throw std::invalid_argument("absolutely continuous measure: density required");
    std::sort(singular_endpoints.begin(), singular_endpoints.end());
    HomogeneousYoungMeasure m(support, Variant::AbsCont);
    m.rep_ = AbsContRep{std::move(density), std::move(singular_endpoints),
                        std::make_shared<CdfTable>()};
    return m;
}

HomogeneousYoungMeasure HomogeneousYoungMeasure::stieltjes(SupportInterval support,
                                                           std::function<double(double)> cdf) {
    if (!cdf) throw std::invalid_argument("stieltjes measure: cdf required");
    HomogeneousYoungMeasure m(support, Variant::Stieltjes);
    m.rep_ = StieltjesRep{std::move(cdf)};
    return m;
}

const char* HomogeneousYoungMeasure::variant_name() const {
    switch (variant_) {
        case Variant::Atomic: return "atomic";
        case Variant::AbsCont: return "abscont";
        case Variant::Stieltjes: return "stieltjes";
    }
    return "?";
}

const std::vector<Atom>& HomogeneousYoungMeasure::atoms() const {
    if (variant_ != Variant::Atomic)
        throw std::logic_error("atoms(): not an atomic measure");
    return std::get<AtomicRep>(rep_).atoms;
}

double HomogeneousYoungMeasure::density_at(double y) const {
    if (variant_ != Variant::AbsCont)
        throw std::logic_error("density_at(): not an absolutely continuous measure");
    return std::get<AbsContRep>(rep_).density(y);
}

std::span<const double> HomogeneousYoungMeasure::singular_endpoints() const {
    if (variant_ != Variant::AbsCont) return {};
    return std::get<AbsContRep>(rep_).singular_endpoints;
}

const HomogeneousYoungMeasure::CdfTable& HomogeneousYoungMeasure::table() const {
    const auto& rep = std::get<AbsContRep>(rep_);
    CdfTable& t = *rep.table;
    std::call_once(t.once, [&] {
        const double c = support_.lo(), d = support_.hi();
        const double span = d - c;

        std::vector<double> anchors;
        anchors.reserve(kUniformSegments + 1 + 128);
        for (std::size_t i = 0; i <= kUniformSegments; ++i)
            anchors.push_back(c + span * static_cast<double>(i) / kUniformSegments);

        // geometric refinement into singular endpoints so that linear
        // interpolation of the CDF stays accurate where g blows up
        const double seg = span / kUniformSegments;
        for (double s : rep.singular_endpoints) {
            if (near_point(s, c, span)) {
                for (double w = 0.5 * seg; w > kGeometricFloor * span; w *= 0.5)
                    anchors.push_back(c + w);
            } else if (near_point(s, d, span)) {
                for (double w = 0.5 * seg; w > kGeometricFloor * span; w *= 0.5)
                    anchors.push_back(d - w);
            }
        }
        std::sort(anchors.begin(), anchors.end());
        anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());

        t.y = std::move(anchors);
        t.cum.assign(t.y.size(), 0.0);
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < t.y.size(); ++i) {
            acc += adaptive_quadrature(rep.density, t.y[i], t.y[i + 1], 1e-13,
                                       rep.singular_endpoints)
                       .value;
            t.cum[i + 1] = acc;
        }
    });
    return t;
}

double HomogeneousYoungMeasure::cdf(double y) const {
    const double c = support_.lo(), d = support_.hi();
    const double slack = 1e-9 * std::max(1.0, support_.length());
    if (y < c - slack || y > d + slack)
        throw DomainError("cdf: point " + std::to_string(y) + " outside the support [" +
                          std::to_string(c) + ", " + std::to_string(d) + "]");
    y = std::clamp(y, c, d);

    switch (variant_) {
        case Variant::Atomic: {
            double s = 0.0;
            for (const Atom& a : std::get<AtomicRep>(rep_).atoms)
                if (a.point <= y) s += a.weight;
            return s;
        }
        case Variant::Stieltjes:
            // F(y) is the measure of [c, y]; an atom at c is part of F(c)
            return std::get<StieltjesRep>(rep_).cdf(y);
        case Variant::AbsCont: {
            const CdfTable& t = table();
            auto it = std::upper_bound(t.y.begin(), t.y.end(), y);
            const std::size_t i = (it == t.y.begin()) ? 0 : (it - t.y.begin() - 1);
            if (i + 1 >= t.y.size()) return t.cum.back();
            const double base = t.cum[i];
            if (y - t.y[i] <= 1e-15 * support_.length()) return base;
            const auto& rep = std::get<AbsContRep>(rep_);
            return base + adaptive_quadrature(rep.density, t.y[i], y, 1e-13,
                                              rep.singular_endpoints)
                              .value;
        }
    }
    return 0.0;
}

double HomogeneousYoungMeasure::cdf_left_limit(double y) const {
    switch (variant_) {
        case Variant::Atomic: {
            double s = 0.0;
            for (const Atom& a : std::get<AtomicRep>(rep_).atoms)
                if (a.point < y) s += a.weight;
            return s;
        }
        case Variant::AbsCont:
            return cdf_interpolated(y);  // continuous
        case Variant::Stieltjes: {
            // step just below y; jumps are assumed isolated at this scale
            const double c = support_.lo();
            const double probe = std::max(c, y - 1e-9 * support_.length());
            return probe <= c ? 0.0 : std::get<StieltjesRep>(rep_).cdf(probe);
        }
    }
    return 0.0;
}

double HomogeneousYoungMeasure::cdf_interpolated(double y) const {
    if (variant_ != Variant::AbsCont) return cdf(y);
    const double c = support_.lo(), d = support_.hi();
    y = std::clamp(y, c, d);
    const CdfTable& t = table();
    auto it = std::upper_bound(t.y.begin(), t.y.end(), y);
    const std::size_t i = (it == t.y.begin()) ? 0 : (it - t.y.begin() - 1);
    if (i + 1 >= t.y.size()) return t.cum.back();
    const double w = t.y[i + 1] - t.y[i];
    const double frac = w > 0.0 ? (y - t.y[i]) / w : 0.0;
    return t.cum[i] + frac * (t.cum[i + 1] - t.cum[i]);
}

double HomogeneousYoungMeasure::integrate(const TestFunction& beta, double tol) const {
    if (!(tol > 0.0)) throw std::invalid_argument("integrate: tol must be > 0");
    const double c = support_.lo(), d = support_.hi();

    switch (variant_) {
        case Variant::Atomic: {
            double s = 0.0;
            for (const Atom& a : std::get<AtomicRep>(rep_).atoms)
                s += a.weight * beta(a.point);
            return s;
        }
        case Variant::AbsCont: {
            const auto& rep = std::get<AbsContRep>(rep_);
            auto integrand = [&](double y) { return beta(y) * rep.density(y); };
            return adaptive_quadrature(integrand, c, d, tol, rep.singular_endpoints).value;
        }
        case Variant::Stieltjes: {
            const auto& rep = std::get<StieltjesRep>(rep_);
            // mass sitting exactly at c is not seen by the telescoping sums
            const double at_c = rep.cdf(c);
            auto rs_sum = [&](std::size_t n) {
                double s = 0.0;
                double fl = at_c;
                for (std::size_t j = 0; j < n; ++j) {
                    const double r = c + (d - c) * static_cast<double>(j + 1) / n;
                    const double fr = rep.cdf(r);
                    const double mid = c + (d - c) * (static_cast<double>(j) + 0.5) / n;
                    s += beta(mid) * (fr - fl);
                    fl = fr;
                }
                return s;
            };
            // successive-doubling gap bounds the remaining error in both the
            // smooth O(1/n^2) and the jump-at-boundary O(1/n) regimes
            std::size_t n = 64;
            double prev = rs_sum(n);
            for (n *= 2; n <= (std::size_t{1} << 24); n *= 2) {
                const double cur = rs_sum(n);
                if (std::abs(cur - prev) <= tol) return beta(c) * at_c + cur;
                prev = cur;
            }
            throw QuadratureError("Riemann-Stieltjes refinement did not reach tolerance");
        }
    }
    return 0.0;
}

double HomogeneousYoungMeasure::measure_of_set(const BorelTestSet& a, double tol) const {
    if (!(tol > 0.0)) throw std::invalid_argument("measure_of_set: tol must be > 0");
    if (a.components.empty()) return 0.0;
    const double slack = 1e-9 * std::max(1.0, support_.length());
    for (const Interval& comp : a.components) {
        if (comp.lo > comp.hi)
            throw std::invalid_argument("measure_of_set: malformed component");
        if (!support_.contains(comp.lo, slack) || !support_.contains(comp.hi, slack))
            throw DomainError("measure_of_set: set '" + a.label +
                              "' is not contained in the support");
    }

    switch (variant_) {
        case Variant::Atomic: {
            double s = 0.0;
            for (const Atom& at : std::get<AtomicRep>(rep_).atoms) {
                for (const Interval& comp : a.components) {
                    if (comp.contains_closed(at.point)) {
                        s += at.weight;
                        break;
                    }
                }
            }
            return s;
        }
        case Variant::AbsCont: {
            const auto& rep = std::get<AbsContRep>(rep_);
            const double per = tol / static_cast<double>(a.components.size());
            double s = 0.0;
            for (const Interval& comp : a.components) {
                if (comp.length() <= 0.0) continue;
                s += adaptive_quadrature(rep.density, comp.lo, comp.hi, per,
                                         rep.singular_endpoints)
                         .value;
            }
            return s;
        }
        case Variant::Stieltjes: {
            const auto& rep = std::get<StieltjesRep>(rep_);
            const double edge = 1e-12 * std::max(1.0, support_.length());
            double s = 0.0;
            for (const Interval& comp : a.components) {
                // a component starting at c covers [c, hi] including mass at c;
                // interior components follow the half-open F(hi) - F(lo) rule
                const double left =
                    comp.lo <= support_.lo() + edge ? 0.0 : rep.cdf(comp.lo);
                s += rep.cdf(comp.hi) - left;
            }
            return s;
        }
    }
    return 0.0;
}

double HomogeneousYoungMeasure::total_mass(double tol) const {
    return integrate(TestFunction{Expr::constant(1.0), "1"}, tol);
}

}  // namespace ym
