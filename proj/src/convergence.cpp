#include "ym/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ym/quadrature.hpp"

namespace ym {

namespace {

constexpr double kSetQuadTol = 1e-10;     // per-set integration accuracy inside probes
constexpr double kMassTol = 1e-9;         // sequence elements must be probability measures
constexpr double kUiCellTol = 1e-8;       // coarse accuracy is plenty for the diagnostic
constexpr int kUiFinestLevel = 10;        // windows from 2^-4 down to 2^-10 of |K|
constexpr int kUiCoarsestLevel = 4;
constexpr double kUiGrowthThreshold = 3.0;

void check_sequence(const MeasureSequence& seq, std::size_t window) {
    if (seq.size() < 2)
        throw std::invalid_argument("measure sequence needs at least two elements");
    if (window < 2 || window > seq.size())
        throw std::invalid_argument("probe window must satisfy 2 <= window <= L");
    if (!seq.labels.empty() && seq.labels.size() != seq.elements.size())
        throw std::invalid_argument("measure sequence labels do not match elements");
    for (std::size_t l = 0; l < seq.size(); ++l) {
        const double mass = seq.elements[l].total_mass(1e-10);
        if (std::abs(mass - 1.0) > kMassTol)
            throw std::invalid_argument("sequence element " + std::to_string(l + 1) +
                                        " is not a probability measure (mass " +
                                        std::to_string(mass) + ")");
    }
}

std::string element_label(const MeasureSequence& seq, std::size_t l) {
    if (l < seq.labels.size()) return seq.labels[l];
    return std::to_string(l + 1);
}

// Shared residual analysis: fills values/residual/limit per set and derives
// the verdict (before any diagnostic downgrade).
ConvergenceReport run_probe(const MeasureSequence& seq, const TestSetFamily& family,
                            double tol, std::size_t window) {
    if (!(tol > 0.0)) throw std::invalid_argument("probe tol must be > 0");
    check_sequence(seq, window);
    if (family.sets.empty()) throw std::invalid_argument("empty test-set family");

    ConvergenceReport report;
    report.tol = tol;
    report.window = window;

    bool any_inconclusive = false;
    bool any_violation = false;
    for (const BorelTestSet& a : family.sets) {
        SetTrace trace;
        trace.label = a.label;
        for (std::size_t l = 0; l < seq.size(); ++l) {
            try {
                trace.values.push_back(seq.elements[l].measure_of_set(a, kSetQuadTol));
            } catch (const std::exception& e) {
                trace.inconclusive = true;
                trace.note = "element " + element_label(seq, l) + ": " + e.what();
                break;
            }
        }
        if (!trace.inconclusive) {
            const std::size_t first = trace.values.size() - window;
            double lo = trace.values[first], hi = trace.values[first];
            for (std::size_t l = first; l < trace.values.size(); ++l) {
                lo = std::min(lo, trace.values[l]);
                hi = std::max(hi, trace.values[l]);
            }
            trace.residual = hi - lo;
            trace.limit = trace.values.back();
            trace.residual_ok = trace.residual <= tol;
            if (!trace.residual_ok) any_violation = true;
        } else {
            any_inconclusive = true;
        }
        report.sets.push_back(std::move(trace));
    }

    if (any_violation)
        report.verdict = Verdict::Inconsistent;
    else if (any_inconclusive)
        report.verdict = Verdict::Inconclusive;
    else
        report.verdict = Verdict::ConsistentWithConvergence;
    return report;
}

UniformIntegrabilityDiagnostic run_ui_diagnostic(const MeasureSequence& seq,
                                                 const SupportInterval& K) {
    UniformIntegrabilityDiagnostic ui;
    for (int lev = kUiCoarsestLevel; lev <= kUiFinestLevel; ++lev)
        ui.window_fractions.push_back(std::ldexp(1.0, -lev));

    const std::size_t cells = std::size_t{1} << kUiFinestLevel;
    const double span = K.length();

    for (std::size_t l = 0; l < seq.size(); ++l) {
        const auto& nu = seq.elements[l];
        // masses of the finest dyadic cells; window masses are range sums
        std::vector<double> prefix(cells + 1, 0.0);
        for (std::size_t j = 0; j < cells; ++j) {
            const double lo = K.lo() + span * static_cast<double>(j) / cells;
            const double hi = K.lo() + span * static_cast<double>(j + 1) / cells;
            const BorelTestSet cell{{{lo, hi}}, ""};
            prefix[j + 1] = prefix[j] + nu.measure_of_set(cell, kUiCellTol);
        }

        std::vector<double> masses;
        double sup_estimate = 0.0;
        for (double frac : ui.window_fractions) {
            const std::size_t w = static_cast<std::size_t>(
                std::llround(frac * static_cast<double>(cells)));
            double best = 0.0;
            for (std::size_t j = 0; j + w <= cells; ++j)
                best = std::max(best, prefix[j + w] - prefix[j]);
            masses.push_back(best);
            sup_estimate = std::max(sup_estimate, best / (frac * span));
        }
        ui.tail_mass.push_back(std::move(masses));
        ui.sup_estimates.push_back(sup_estimate);
    }

    const double first = std::max(ui.sup_estimates.front(), 1e-300);
    ui.growth_ratio = ui.sup_estimates.back() / first;
    ui.fired = ui.growth_ratio >= kUiGrowthThreshold &&
               ui.sup_estimates.back() >= kUiGrowthThreshold / span;
    return ui;
}

}  // namespace

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::ConsistentWithConvergence: return "consistent-with-convergence";
        case Verdict::Inconsistent: return "inconsistent";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

ConvergenceReport weak_l1_probe(const MeasureSequence& densities,
                                const TestSetFamily& family, double tol,
                                std::size_t window) {
    for (const auto& nu : densities.elements)
        if (nu.variant() != HomogeneousYoungMeasure::Variant::AbsCont)
            throw std::invalid_argument(
                "weak_l1_probe: every sequence element must carry a density");

    ConvergenceReport report = run_probe(densities, family, tol, window);
    try {
        report.uniform_integrability = run_ui_diagnostic(densities, family.support);
    } catch (const std::exception& e) {
        if (report.verdict == Verdict::ConsistentWithConvergence)
            report.verdict = Verdict::Inconclusive;
        report.annotation = std::string("uniform-integrability diagnostic failed: ") + e.what();
        return report;
    }
    if (report.uniform_integrability->fired &&
        report.verdict == Verdict::ConsistentWithConvergence) {
        report.verdict = Verdict::Inconclusive;
        report.annotation =
            "uniform-integrability diagnostic fired: mass concentrates on shrinking sets "
            "(sup estimate grew by x" +
            std::to_string(report.uniform_integrability->growth_ratio) +
            "); set-wise limits exist but weak L1 convergence is not established";
    }
    return report;
}

ConvergenceReport weak_measure_probe(const MeasureSequence& measures,
                                     const TestSetFamily& family, double tol,
                                     std::size_t window) {
    return run_probe(measures, family, tol, window);
}

EquivalenceReport equivalence_check(const ConvergenceReport& density_report,
                                    const ConvergenceReport& measure_report,
                                    double tol) {
    if (density_report.sets.size() != measure_report.sets.size())
        throw std::invalid_argument("equivalence_check: reports cover different families");
    for (std::size_t i = 0; i < density_report.sets.size(); ++i)
        if (density_report.sets[i].label != measure_report.sets[i].label)
            throw std::invalid_argument("equivalence_check: reports cover different families");

    EquivalenceReport eq;
    eq.tol = tol;
    eq.density_verdict = density_report.verdict;
    eq.measure_verdict = measure_report.verdict;
    eq.verdicts_agree = density_report.verdict == measure_report.verdict;

    for (std::size_t i = 0; i < density_report.sets.size(); ++i) {
        const SetTrace& d = density_report.sets[i];
        const SetTrace& m = measure_report.sets[i];
        if (d.inconclusive || m.inconclusive) continue;
        const double gap = std::abs(d.limit - m.limit);
        if (gap > eq.max_limit_gap) {
            eq.max_limit_gap = gap;
            eq.max_gap_set = d.label;
        }
    }
    eq.limits_agree = eq.max_limit_gap <= tol;

    const bool density_blocked_by_ui =
        density_report.uniform_integrability && density_report.uniform_integrability->fired &&
        density_report.verdict == Verdict::Inconclusive;

    if (eq.verdicts_agree) {
        const bool both_converge =
            density_report.verdict == Verdict::ConsistentWithConvergence;
        eq.outcome = (!both_converge || eq.limits_agree) ? EquivalenceOutcome::Supported
                                                         : EquivalenceOutcome::Violation;
        if (eq.outcome == EquivalenceOutcome::Violation)
            eq.annotation = "both probes converge but per-set limits differ (max gap " +
                            std::to_string(eq.max_limit_gap) + " on " + eq.max_gap_set + ")";
    } else if (density_blocked_by_ui &&
               measure_report.verdict == Verdict::ConsistentWithConvergence) {
        eq.outcome = EquivalenceOutcome::AnnotatedInconclusive;
        eq.annotation =
            "density-side uniform-integrability diagnostic fired; the set-wise limits agree "
            "with the measure probe but weak L1 convergence of the densities is not "
            "established, so the equivalence is not contradicted";
    } else {
        eq.outcome = EquivalenceOutcome::Violation;
        eq.annotation = std::string("probe verdicts disagree: densities ") +
                        verdict_name(density_report.verdict) + ", measures " +
                        verdict_name(measure_report.verdict);
    }
    return eq;
}

PartitionedFunction oscillating_sequence(const PartitionedFunction& base, std::size_t l) {
    if (l == 0) throw std::invalid_argument("oscillating_sequence: l must be >= 1");
    {
        const ValidationReport rep = validate(base);
        if (!rep.ok()) throw ValidationError(rep);
    }
    if (l == 1) return base;

    const double a = base.domain().lo;
    const double span = base.domain_measure();
    const double ld = static_cast<double>(l);

    // One shared formula for every knot so adjacent blocks reproduce their
    // common edges bit-identically.
    auto knot = [&](std::size_t k, double t) {
        const double tau = (t - a) / span;
        return a + span * ((static_cast<double>(k) + tau) / ld);
    };

    std::vector<Piece> pieces;
    pieces.reserve(l * base.pieces().size());
    for (std::size_t k = 0; k < l; ++k) {
        // s(x) = l*(x - a) - k*span + a maps block k back onto the base domain
        const double shift = a * (1.0 - ld) - static_cast<double>(k) * span;
        const Expr rescale = Expr::binary(
            Expr::Op::Add,
            Expr::binary(Expr::Op::Mul, Expr::constant(ld), Expr::variable()),
            Expr::constant(shift));
        for (const Piece& p : base.pieces()) {
            const Interval cell{knot(k, p.cell().lo), knot(k, p.cell().hi)};
            pieces.push_back(Piece::make(cell, substitute(p.fn(), rescale)));
        }
    }
    return PartitionedFunction(base.domain(), base.kind(), std::move(pieces));
}

bool ScenarioReport::ok() const {
    return monotone_ok && bounded_ok &&
           probe.verdict == Verdict::ConsistentWithConvergence;
}

ScenarioReport monotone_density_scenario(const MeasureSequence& densities,
                                         const TestSetFamily& family, double tol,
                                         std::size_t window) {
    for (const auto& nu : densities.elements)
        if (nu.variant() != HomogeneousYoungMeasure::Variant::AbsCont)
            throw std::invalid_argument(
                "monotone_density_scenario: every sequence element must carry a density");
    check_sequence(densities, window);

    ScenarioReport report;
    report.monotone_ok = true;
    report.bounded_ok = true;
    for (const BorelTestSet& a : family.sets) {
        std::vector<double> values;
        for (const auto& nu : densities.elements)
            values.push_back(nu.measure_of_set(a, kSetQuadTol));
        for (double v : values) {
            report.max_value = std::max(report.max_value, v);
            if (v > 1.0 + tol) report.bounded_ok = false;
        }
        for (std::size_t l = 0; l + 1 < values.size(); ++l) {
            if (values[l] > values[l + 1] + tol) {
                report.monotone_ok = false;
                report.witnesses.push_back(
                    {a.label, l, l + 1, values[l], values[l + 1]});
                break;  // one witness per set is enough
            }
        }
    }
    report.probe = weak_l1_probe(densities, family, tol, window);
    return report;
}

}  // namespace ym
