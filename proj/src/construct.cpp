#include "ym/construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ym/quadrature.hpp"

namespace ym {

namespace {

void require_valid(const PartitionedFunction& u,
                   const std::optional<SupportInterval>& onto = std::nullopt) {
    const ValidationReport rep = validate(u, onto);
    if (!rep.ok()) throw ValidationError(rep);
}

}  // namespace

HomogeneousYoungMeasure atomic_young_measure(const PartitionedFunction& u,
                                             const SupportInterval& K) {
    if (u.kind() != FunctionKind::PiecewiseConstant)
        throw std::invalid_argument("atomic_young_measure: function is not piecewise constant");
    require_valid(u);

    struct Rep {
        double value;
        double length;
    };
    std::vector<Rep> groups;
    for (const Piece& p : u.pieces()) {
        const double c = p.fn().constant_value();
        const double merge_tol = 1e-12 * std::max(1.0, std::abs(c));
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const Rep& g) { return std::abs(g.value - c) <= merge_tol; });
        if (it == groups.end())
            groups.push_back({c, p.cell().length()});
        else
            it->length += p.cell().length();
    }

    const double m = u.domain_measure();
    std::vector<Atom> atoms;
    atoms.reserve(groups.size());
    for (const Rep& g : groups) atoms.push_back({g.value, g.length / m});
    return HomogeneousYoungMeasure::atomic(K, std::move(atoms));
}

HomogeneousYoungMeasure density_young_measure(const PartitionedFunction& u,
                                              const SupportInterval& K) {
    if (u.kind() != FunctionKind::PiecewiseInvertible)
        throw std::invalid_argument("density_young_measure: function is not piecewise invertible");
    require_valid(u, K);

    std::vector<double> singular;
    for (const Piece& p : u.pieces())
        for (double s : p.singular_image_endpoints()) singular.push_back(s);
    std::sort(singular.begin(), singular.end());
    singular.erase(std::unique(singular.begin(), singular.end(),
                               [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
                   singular.end());

    const double m = u.domain_measure();
    std::vector<Piece> pieces(u.pieces().begin(), u.pieces().end());
    auto density = [pieces, m, singular](double y) {
        // the density is genuinely +inf at a vanishing-slope image endpoint;
        // quadrature nodes never land on one
        for (double s : singular)
            if (y == s) return std::numeric_limits<double>::infinity();
        double total = 0.0;
        for (const Piece& p : pieces) total += p.inverse_slope_magnitude(y);
        return total / m;
    };
    return HomogeneousYoungMeasure::absolutely_continuous(K, std::move(density),
                                                          std::move(singular));
}

HomogeneousYoungMeasure pushforward_young_measure(const PartitionedFunction& u,
                                                  const SupportInterval& K) {
    require_valid(u);

    const double m = u.domain_measure();
    std::vector<Piece> pieces(u.pieces().begin(), u.pieces().end());
    auto cdf = [pieces, m](double y) {
        double acc = 0.0;
        for (const Piece& p : pieces) {
            const double len = p.cell().length();
            double part;
            if (p.is_constant()) {
                part = p.image().lo <= y ? len : 0.0;
            } else if (y >= p.image().hi) {
                part = len;
            } else if (y <= p.image().lo) {
                part = 0.0;
            } else if (p.direction() > 0) {
                part = p.invert(y) - p.cell().lo;
            } else {
                part = p.cell().hi - p.invert(y);
            }
            acc += std::clamp(part, 0.0, len);
        }
        return acc / m;
    };
    return HomogeneousYoungMeasure::stieltjes(K, std::move(cdf));
}

HomogeneousYoungMeasure stieltjes_from_monotone(const PartitionedFunction& u) {
    if (u.pieces().size() != 1)
        throw std::invalid_argument("stieltjes_from_monotone: exactly one piece required");
    const Piece& p = u.pieces().front();
    if (p.direction() <= 0)
        throw std::invalid_argument(
            "stieltjes_from_monotone: branch must be strictly increasing (reflect first)");
    require_valid(u);

    const SupportInterval K(p.image().lo, p.image().hi);
    const double a = u.domain().lo;
    const double m = u.domain_measure();
    auto cdf = [p, a, m](double y) { return std::clamp((p.invert(y) - a) / m, 0.0, 1.0); };
    return HomogeneousYoungMeasure::stieltjes(K, std::move(cdf));
}

std::vector<HomogeneousYoungMeasure> build_representations(const PartitionedFunction& u,
                                                           const SupportInterval& K) {
    require_valid(u);
    std::vector<HomogeneousYoungMeasure> reps;
    if (u.kind() == FunctionKind::PiecewiseConstant) {
        reps.push_back(atomic_young_measure(u, K));
    } else if (validate(u, K).ok()) {
        reps.push_back(density_young_measure(u, K));
    }
    // the image-measure construction carries no onto requirement and covers
    // invertible functions whose branches are not onto K
    reps.push_back(pushforward_young_measure(u, K));
    return reps;
}

bool IdentityReport::ok() const {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(),
                       [](const IdentityCheck& c) { return c.pass; });
}

IdentityReport verify_fundamental_identity(const PartitionedFunction& u,
                                           const HomogeneousYoungMeasure& nu,
                                           std::span<const TestFunction> betas,
                                           double tol) {
    if (!(tol > 0.0))
        throw std::invalid_argument("verify_fundamental_identity: tol must be > 0");
    require_valid(u);

    const double m = u.domain_measure();
    IdentityReport report;
    for (const TestFunction& beta : betas) {
        IdentityCheck check;
        check.beta_label = beta.label;
        check.tol = tol;
        try {
            check.lhs = nu.integrate(beta, 0.25 * tol);
            const double per_piece = 0.25 * tol / static_cast<double>(u.pieces().size());
            double sum = 0.0;
            for (const Piece& p : u.pieces()) {
                auto composed = [&](double x) { return beta(p(x)); };
                sum += adaptive_quadrature(composed, p.cell().lo, p.cell().hi, per_piece).value;
            }
            check.rhs = sum / m;
            check.abs_diff = std::abs(check.lhs - check.rhs);
            check.pass = check.abs_diff <= tol;
        } catch (const std::exception& e) {
            check.error = e.what();
            check.pass = false;
        }
        report.checks.push_back(std::move(check));
    }
    return report;
}

bool CrossReport::ok() const {
    // a single-representation function has nothing to disagree with
    return std::all_of(pairs.begin(), pairs.end(), [](const CrossPair& p) { return p.pass; });
}

CrossReport cross_validate(const PartitionedFunction& u, const SupportInterval& K,
                           double tol, std::size_t grid_points) {
    if (grid_points < 2)
        throw std::invalid_argument("cross_validate: grid must have at least two points");
    const auto reps = build_representations(u, K);

    CrossReport report;
    report.grid_points = grid_points;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        for (std::size_t j = i + 1; j < reps.size(); ++j) {
            CrossPair pair;
            pair.rep_a = reps[i].variant_name();
            pair.rep_b = reps[j].variant_name();
            pair.tol = tol;
            for (std::size_t k = 0; k < grid_points; ++k) {
                const double y = K.lo() + K.length() * static_cast<double>(k) /
                                              static_cast<double>(grid_points - 1);
                const double diff = std::abs(reps[i].cdf(y) - reps[j].cdf(y));
                if (diff > pair.sup_discrepancy) {
                    pair.sup_discrepancy = diff;
                    pair.at_y = y;
                }
            }
            pair.pass = pair.sup_discrepancy <= tol;
            report.pairs.push_back(std::move(pair));
        }
    }
    return report;
}

}  // namespace ym
