// Acceptance suite: exercises the full pipeline end to end and prints one
// PASS/FAIL line per criterion. Non-zero exit when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ym/construct.hpp"
#include "ym/convergence.hpp"
#include "ym/quadrature.hpp"
#include "ym/sampling.hpp"
#include "ym/spec_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Check {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

int g_failures = 0;

void run_criterion(int id, const std::string& title, const std::function<void(Check&)>& body) {
    Check check;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(check);
    } catch (const std::exception& e) {
        check.require(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!check.pass) ++g_failures;
    std::printf("%s criterion %d: %s (%.2fs)%s%s\n", check.pass ? "PASS" : "FAIL", id,
                title.c_str(), seconds, check.pass ? "" : " -- ",
                check.pass ? "" : check.detail.c_str());
    std::fflush(stdout);
}

std::string fixture_path(const std::string& name) {
    return std::string(YM_FIXTURE_DIR) + "/" + name;
}

ym::FunctionSpecDoc fixture_doc(const std::string& name) {
    return ym::load_spec_doc(fixture_path(name));
}

struct Fixture {
    std::string name;
    ym::PartitionedFunction u;
    ym::SupportInterval K;
};

std::vector<Fixture> all_fixtures() {
    std::vector<Fixture> fx;
    for (const char* name : {"identity.json", "xsq.json", "sawtooth.json", "osc3.json",
                             "step.json"}) {
        auto doc = fixture_doc(name);
        fx.push_back({doc.name, ym::build_function(doc), doc.K});
    }
    return fx;
}

ym::HomogeneousYoungMeasure natural_measure(const Fixture& f) {
    if (f.u.kind() == ym::FunctionKind::PiecewiseConstant)
        return ym::atomic_young_measure(f.u, f.K);
    return ym::density_young_measure(f.u, f.K);
}

// u_l(x) = x + x^2 / l on (0,1), onto K_l = [0, 1 + 1/l]
ym::PartitionedFunction drift_member(int l) {
    const std::string expr = "x + x^2/" + std::to_string(l);
    std::vector<ym::Piece> ps;
    ps.push_back(ym::Piece::parse({0.0, 1.0}, expr));
    return ym::PartitionedFunction({0.0, 1.0}, ym::FunctionKind::PiecewiseInvertible,
                                   std::move(ps));
}

// u_l(x) = x^(1/l) on (0,1): the Young-measure density is l * y^(l-1),
// which concentrates at 1 as l grows
ym::PartitionedFunction concentration_member(int l) {
    const std::string expr = l == 1 ? "x" : "x^(1/" + std::to_string(l) + ")";
    std::vector<ym::Piece> ps;
    ps.push_back(ym::Piece::parse({0.0, 1.0}, expr));
    return ym::PartitionedFunction({0.0, 1.0}, ym::FunctionKind::PiecewiseInvertible,
                                   std::move(ps));
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(YM_CLI_PATH) + " " + args + " >/dev/null 2>/dev/null";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return "<unreadable:" + p.string() + ">";
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------------------

void criterion_1_fundamental_identity(Check& check) {
    const auto suite = ym::default_test_suite();
    for (const Fixture& f : all_fixtures()) {
        const auto nu = natural_measure(f);
        const auto report = ym::verify_fundamental_identity(f.u, nu, suite, 1e-7);
        for (const auto& c : report.checks)
            check.require(c.pass, f.name + " beta=" + c.beta_label + " |lhs-rhs|=" +
                                      std::to_string(c.abs_diff) + " " + c.error);
    }
}

void criterion_2_image_measure(Check& check) {
    for (const Fixture& f : all_fixtures()) {
        const auto nu = natural_measure(f);
        const auto sample = ym::monte_carlo_pushforward(f.u, 1'000'000, 42u);
        const double dist = ym::ks_distance(sample, nu);
        check.require(dist < 0.005,
                      f.name + " KS distance " + std::to_string(dist) + " >= 0.005");
    }
}

void criterion_3_density_formula(Check& check) {
    {
        const auto doc = fixture_doc("xsq.json");
        const auto nu = ym::density_young_measure(ym::build_function(doc), doc.K);
        for (int k = 1; k < 1025; ++k) {
            const double y = static_cast<double>(k) / 1024.0;
            const double expected = 0.5 / std::sqrt(y);
            const double got = nu.density_at(y);
            if (std::abs(got - expected) > 1e-9 * expected) {
                check.require(false, "xsq density at y=" + std::to_string(y) + ": " +
                                         std::to_string(got) + " vs " + std::to_string(expected));
                break;
            }
        }
    }
    {
        const auto doc = fixture_doc("sawtooth.json");
        const auto nu = ym::density_young_measure(ym::build_function(doc), doc.K);
        for (int k = 0; k < 1025; ++k) {
            const double y = static_cast<double>(k) / 1024.0;
            if (std::abs(nu.density_at(y) - 1.0) > 1e-9) {
                check.require(false, "sawtooth density at y=" + std::to_string(y));
                break;
            }
        }
    }
    for (const char* name : {"identity.json", "xsq.json", "sawtooth.json", "osc3.json"}) {
        const auto doc = fixture_doc(name);
        const auto nu = ym::density_young_measure(ym::build_function(doc), doc.K);
        const double mass = nu.total_mass(1e-10);
        check.require(std::abs(mass - 1.0) <= 1e-9,
                      std::string(name) + " mass " + std::to_string(mass));
    }
}

void criterion_4_representation_agreement(Check& check) {
    for (const char* name : {"identity.json", "xsq.json", "sawtooth.json", "osc3.json"}) {
        const auto doc = fixture_doc(name);
        const auto report =
            ym::cross_validate(ym::build_function(doc), doc.K, 1e-9, 1025);
        for (const auto& p : report.pairs)
            check.require(p.pass, std::string(name) + " " + p.rep_a + " vs " + p.rep_b +
                                      " sup " + std::to_string(p.sup_discrepancy));
    }
    {
        const auto doc = fixture_doc("step.json");
        const auto report =
            ym::cross_validate(ym::build_function(doc), doc.K, 1e-9, 1025);
        for (const auto& p : report.pairs)
            check.require(p.sup_discrepancy == 0.0,
                          "step " + p.rep_a + " vs " + p.rep_b + " sup " +
                              std::to_string(p.sup_discrepancy) + " != 0");
    }
}

void criterion_5_oscillation_invariance(Check& check) {
    for (const char* name : {"sawtooth.json", "identity.json"}) {
        const auto doc = fixture_doc(name);
        const auto base = ym::build_function(doc);
        const auto base_nu = ym::density_young_measure(base, doc.K);

        ym::MeasureSequence densities, measures;
        for (std::size_t l : {1u, 2u, 4u, 8u, 16u, 32u, 64u}) {
            const auto ul = ym::oscillating_sequence(base, l);
            const auto nu = ym::density_young_measure(ul, doc.K);
            for (int k = 0; k < 1025; ++k) {
                const double y = doc.K.lo() + doc.K.length() * k / 1024.0;
                const double diff = std::abs(nu.density_at(y) - base_nu.density_at(y));
                if (diff > 1e-9) {
                    check.require(false, std::string(name) + " l=" + std::to_string(l) +
                                             " density differs by " + std::to_string(diff) +
                                             " at y=" + std::to_string(y));
                    break;
                }
            }
            densities.elements.push_back(nu);
            densities.labels.push_back("l=" + std::to_string(l));
            measures.elements.push_back(ym::pushforward_young_measure(ul, doc.K));
            measures.labels.push_back("l=" + std::to_string(l));
        }

        const auto family = ym::generate_test_sets(doc.K, 4);
        const auto dens = ym::weak_l1_probe(densities, family, 1e-9, 3);
        const auto meas = ym::weak_measure_probe(measures, family, 1e-9, 3);
        check.require(dens.verdict == ym::Verdict::ConsistentWithConvergence,
                      std::string(name) + " density probe " + ym::verdict_name(dens.verdict) +
                          " " + dens.annotation);
        check.require(meas.verdict == ym::Verdict::ConsistentWithConvergence,
                      std::string(name) + " measure probe " + ym::verdict_name(meas.verdict));
        for (const auto& s : dens.sets)
            check.require(s.residual <= 1e-9, std::string(name) + " density residual " +
                                                  std::to_string(s.residual) + " on " + s.label);
        for (const auto& s : meas.sets)
            check.require(s.residual <= 1e-9, std::string(name) + " measure residual " +
                                                  std::to_string(s.residual) + " on " + s.label);
    }
}

void criterion_6_equivalence_surrogate(Check& check) {
    // drift family u_l = x + x^2/l: tail residuals scale like 1/L, so the
    // probe tolerance is 0.05; the 1e-6 bound applies to the agreement of
    // the two probes' per-set limits
    {
        ym::MeasureSequence densities, measures;
        std::vector<ym::SupportInterval> supports;
        for (int l = 1; l <= 8; ++l) {
            const auto u = drift_member(l);
            const auto& img = u.pieces().front().image();
            const ym::SupportInterval K(img.lo, img.hi);
            densities.elements.push_back(ym::density_young_measure(u, K));
            densities.labels.push_back("l=" + std::to_string(l));
            measures.elements.push_back(ym::pushforward_young_measure(u, K));
            measures.labels.push_back("l=" + std::to_string(l));
            supports.push_back(K);
        }
        double lo = supports.front().lo(), hi = supports.front().hi();
        for (const auto& k : supports) {
            lo = std::max(lo, k.lo());
            hi = std::min(hi, k.hi());
        }
        const auto family = ym::generate_test_sets(ym::SupportInterval(lo, hi), 4);
        const auto dens = ym::weak_l1_probe(densities, family, 0.05, 3);
        const auto meas = ym::weak_measure_probe(measures, family, 0.05, 3);
        const auto eq = ym::equivalence_check(dens, meas, 1e-6);
        check.require(dens.verdict == ym::Verdict::ConsistentWithConvergence,
                      "drift density probe " + std::string(ym::verdict_name(dens.verdict)) +
                          " " + dens.annotation);
        check.require(meas.verdict == ym::Verdict::ConsistentWithConvergence,
                      "drift measure probe " + std::string(ym::verdict_name(meas.verdict)));
        check.require(eq.limits_agree, "drift limit gap " + std::to_string(eq.max_limit_gap) +
                                           " on " + eq.max_gap_set);
        check.require(eq.outcome == ym::EquivalenceOutcome::Supported,
                      "drift equivalence outcome not supported: " + eq.annotation);
    }
    // concentration family g_l = l y^(l-1): the measure probe converges
    // set-wise while the density probe's uniform-integrability diagnostic
    // fires; the run must emit the annotation rather than a contradiction
    {
        ym::MeasureSequence densities, measures;
        const ym::SupportInterval K(0.0, 1.0);
        for (int l = 1; l <= 8; ++l) {
            const auto u = concentration_member(l);
            densities.elements.push_back(ym::density_young_measure(u, K));
            densities.labels.push_back("l=" + std::to_string(l));
            measures.elements.push_back(ym::pushforward_young_measure(u, K));
            measures.labels.push_back("l=" + std::to_string(l));
        }
        const auto family = ym::generate_test_sets(K, 4);
        const auto dens = ym::weak_l1_probe(densities, family, 0.15, 3);
        const auto meas = ym::weak_measure_probe(measures, family, 0.15, 3);
        const auto eq = ym::equivalence_check(dens, meas, 1e-6);
        check.require(meas.verdict == ym::Verdict::ConsistentWithConvergence,
                      "concentration measure probe " +
                          std::string(ym::verdict_name(meas.verdict)));
        check.require(dens.uniform_integrability && dens.uniform_integrability->fired,
                      "concentration diagnostic did not fire");
        check.require(dens.verdict == ym::Verdict::Inconclusive,
                      "concentration density probe " +
                          std::string(ym::verdict_name(dens.verdict)));
        check.require(!dens.annotation.empty(), "density-side annotation missing");
        check.require(eq.outcome == ym::EquivalenceOutcome::AnnotatedInconclusive,
                      "equivalence should be annotated-inconclusive, got " + eq.annotation);
        check.require(!eq.annotation.empty(), "equivalence annotation missing");
    }
}

void criterion_7_monotone_scenario(Check& check) {
    const auto family = ym::generate_test_sets(ym::SupportInterval(0.0, 1.0), 4);
    {
        ym::MeasureSequence seq;
        for (int i = 0; i < 3; ++i) {
            const auto doc = fixture_doc("mono_pass/01.json");
            seq.elements.push_back(
                ym::density_young_measure(ym::build_function(doc), doc.K));
            seq.labels.push_back(std::to_string(i + 1));
        }
        const auto report = ym::monotone_density_scenario(seq, family, 1e-6, 2);
        check.require(report.ok(), "monotone fixture sequence did not pass");
    }
    {
        ym::MeasureSequence seq;
        for (const char* name : {"mono_cross/01_down.json", "mono_cross/02_up.json"}) {
            const auto doc = fixture_doc(name);
            seq.elements.push_back(
                ym::density_young_measure(ym::build_function(doc), doc.K));
            seq.labels.push_back(doc.name);
        }
        const auto report = ym::monotone_density_scenario(seq, family, 1e-6, 2);
        check.require(!report.monotone_ok, "crossing pair not detected");
        check.require(!report.witnesses.empty() &&
                          report.witnesses.front().set_label == "[0,0.5]",
                      "witness set is not [0,0.5]");
    }
}

void criterion_8_determinism(Check& check) {
    const fs::path base = fs::temp_directory_path() / "ym_acceptance_det";
    fs::remove_all(base);
    const fs::path out1 = base / "a", out2 = base / "b";

    for (const std::string& args :
         {std::string("verify ") + fixture_path("sawtooth.json") +
              " --samples 50000 --seed 42 --dump-samples",
          std::string("compute ") + fixture_path("xsq.json"),
          std::string("converge --oscillate ") + fixture_path("sawtooth.json") +
              " --levels 2 --depth 3 --tol 1e-9",
          std::string("scenario-monotone ") + fixture_path("mono_pass") +
              " --depth 2 --window 2"}) {
        check.require(run_cli("-o " + out1.string() + " " + args) == 0,
                      "cli run failed: " + args);
        check.require(run_cli("-o " + out2.string() + " " + args) == 0,
                      "cli rerun failed: " + args);
    }
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(out1)) {
        const fs::path other = out2 / entry.path().filename();
        check.require(fs::exists(other), "missing rerun output " + other.string());
        if (fs::exists(other)) {
            check.require(slurp(entry.path()) == slurp(other),
                          "outputs differ: " + entry.path().filename().string());
            ++compared;
        }
    }
    check.require(compared >= 8, "expected at least 8 report files, saw " +
                                     std::to_string(compared));
    fs::remove_all(base);
}

void criterion_9_oracle_calibration(Check& check) {
    for (int k = 0; k <= 10; ++k) {
        const auto r = ym::adaptive_quadrature(
            [k](double x) { return std::pow(x, k); }, 0.0, 1.0, 1e-12);
        check.require(std::abs(r.value - 1.0 / (k + 1)) <= 1e-12,
                      "degree " + std::to_string(k) + " monomial off by " +
                          std::to_string(std::abs(r.value - 1.0 / (k + 1))));
    }
    {
        const double singular[] = {0.0};
        const auto r = ym::adaptive_quadrature(
            [](double y) { return 0.5 / std::sqrt(y); }, 0.0, 1.0, 1e-9, singular);
        check.require(std::abs(r.value - 1.0) <= 1e-9,
                      "singular integral " + std::to_string(r.value));
    }
    std::mt19937_64 rng(20250808u);
    for (const char* name : {"identity.json", "xsq.json", "sawtooth.json", "osc3.json"}) {
        const auto u = ym::build_function(fixture_doc(name));
        const std::size_t per_piece = 10000 / u.pieces().size() + 1;
        for (const auto& p : u.pieces()) {
            for (std::size_t i = 0; i < per_piece; ++i) {
                const double t = static_cast<double>(rng() >> 11) * 0x1.0p-53;
                const double y = p.image().lo + p.image().length() * t;
                const double x = p.invert(y, 1e-12);
                if (std::abs(p(x) - y) > 1e-12 * std::max(1.0, std::abs(y))) {
                    check.require(false, std::string(name) + " round-trip residual at y=" +
                                             std::to_string(y));
                    break;
                }
            }
        }
    }
}

}  // namespace

int main() {
    run_criterion(1, "fundamental identity on all fixtures", [](Check& c) {
        const auto t0 = std::chrono::steady_clock::now();
        criterion_1_fundamental_identity(c);
        const double s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        c.require(s < 5.0, "runtime " + std::to_string(s) + "s exceeds 5s");
    });
    run_criterion(2, "image-measure theorem via Monte-Carlo KS", [](Check& c) {
        const auto t0 = std::chrono::steady_clock::now();
        criterion_2_image_measure(c);
        const double s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        c.require(s < 30.0, "runtime " + std::to_string(s) + "s exceeds 30s");
    });
    run_criterion(3, "inverse-derivative density formula", criterion_3_density_formula);
    run_criterion(4, "representation agreement", criterion_4_representation_agreement);
    run_criterion(5, "oscillation invariance", criterion_5_oscillation_invariance);
    run_criterion(6, "density/measure equivalence surrogate", criterion_6_equivalence_surrogate);
    run_criterion(7, "monotone scenario", criterion_7_monotone_scenario);
    run_criterion(8, "CLI determinism", criterion_8_determinism);
    run_criterion(9, "oracle calibration", criterion_9_oracle_calibration);

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
