#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ym/measure.hpp"
#include "ym/piecewise.hpp"
#include "ym/test_sets.hpp"

namespace ym {

// Ordered finite sequence nu^1 ... nu^L of homogeneous Young measures (or of
// densities wrapped as absolutely continuous measures).
struct MeasureSequence {
    std::vector<HomogeneousYoungMeasure> elements;
    std::vector<std::string> labels;  // one per element; defaults to "1".."L"

    std::size_t size() const { return elements.size(); }
};

enum class Verdict { ConsistentWithConvergence, Inconsistent, Inconclusive };

const char* verdict_name(Verdict v);

// Values of one test set across the sequence.
struct SetTrace {
    std::string label;
    std::vector<double> values;   // v_l = integral over the set / measure of the set
    double residual = 0.0;        // max pairwise gap over the tail window
    double limit = 0.0;           // final value; residual doubles as its uncertainty
    bool residual_ok = false;
    bool inconclusive = false;    // quadrature failed somewhere for this set
    std::string note;
};

// Tail-mass diagnostic at dyadic window widths. Detects mass concentrating
// on ever-smaller sets along the sequence, the situation where set-wise
// convergence on intervals does not deliver weak L1 convergence.
struct UniformIntegrabilityDiagnostic {
    std::vector<double> window_fractions;         // of |K|: 2^-4 .. 2^-10
    std::vector<std::vector<double>> tail_mass;   // [element][window]
    std::vector<double> sup_estimates;            // S_l = max over windows of mass/width
    double growth_ratio = 0.0;                    // S_last / S_first
    bool fired = false;
};

struct ConvergenceReport {
    std::vector<SetTrace> sets;
    Verdict verdict = Verdict::Inconclusive;
    double tol = 0.0;
    std::size_t window = 0;
    std::optional<UniformIntegrabilityDiagnostic> uniform_integrability;
    std::string annotation;
};

// Weak-L1 probe over a density sequence: computes the integral of every
// density over every test set by adaptive quadrature and checks that each
// per-set value sequence is Cauchy over the last `window` indices within
// tol. Consistency additionally requires a clean uniform-integrability
// diagnostic; a fired diagnostic downgrades the verdict to Inconclusive with
// an annotation rather than claiming convergence. Elements must be
// absolutely continuous with total mass 1 within 1e-9.
ConvergenceReport weak_l1_probe(const MeasureSequence& densities,
                                const TestSetFamily& family, double tol = 1e-6,
                                std::size_t window = 3);

// Same residual analysis applied to set measures nu_l(A) for measures in any
// representation. No uniform-integrability diagnostic on this side.
ConvergenceReport weak_measure_probe(const MeasureSequence& measures,
                                     const TestSetFamily& family, double tol = 1e-6,
                                     std::size_t window = 3);

enum class EquivalenceOutcome {
    Supported,                // verdicts agree; limits agree where both converge
    AnnotatedInconclusive,    // density side blocked by uniform integrability only
    Violation,                // verdicts or limits disagree with no annotation to give
};

struct EquivalenceReport {
    Verdict density_verdict = Verdict::Inconclusive;
    Verdict measure_verdict = Verdict::Inconclusive;
    bool verdicts_agree = false;
    double max_limit_gap = 0.0;
    std::string max_gap_set;
    bool limits_agree = false;
    double tol = 0.0;
    EquivalenceOutcome outcome = EquivalenceOutcome::Violation;
    std::string annotation;

    bool ok() const { return outcome != EquivalenceOutcome::Violation; }
};

// Confronts the two probes over the same family: the sequence of densities
// converges weakly in L1 exactly when the measure sequence converges weakly,
// so the verdicts must agree and, when both converge, the per-set limits
// must match within tol.
EquivalenceReport equivalence_check(const ConvergenceReport& density_report,
                                    const ConvergenceReport& measure_report,
                                    double tol = 1e-6);

// l-fold periodic rescaling: the domain splits into l congruent blocks and
// the base is affinely compressed into each. The result has l * n pieces,
// passes validation whenever the base does, and shares the base's Young
// measure when every base branch maps onto K.
PartitionedFunction oscillating_sequence(const PartitionedFunction& base, std::size_t l);

struct MonotoneWitness {
    std::string set_label;
    std::size_t from_index = 0;  // v[from] > v[to] + tol
    std::size_t to_index = 0;
    double value_from = 0.0;
    double value_to = 0.0;
};

struct ScenarioReport {
    bool monotone_ok = false;
    std::vector<MonotoneWitness> witnesses;
    bool bounded_ok = false;
    double max_value = 0.0;
    ConvergenceReport probe;

    bool ok() const;
};

// Scenario for density sequences whose per-set integrals are nondecreasing:
// asserts monotonicity over every test set (witnessing the first violation
// per set), boundedness by the total mass 1, and then runs the weak-L1
// probe; monotone bounded per-set sequences must converge.
ScenarioReport monotone_density_scenario(const MeasureSequence& densities,
                                         const TestSetFamily& family, double tol = 1e-6,
                                         std::size_t window = 3);

}  // namespace ym
