// ym: build homogeneous Young measures of piecewise functions, verify them
// against independent oracles, and probe weak convergence of sequences.
//
// Exit codes: 0 success, 1 a check failed, 2 validation failure,
//             3 I/O error, 4 parse error (document, expression, or usage).

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ym/construct.hpp"
#include "ym/convergence.hpp"
#include "ym/report_json.hpp"
#include "ym/sampling.hpp"
#include "ym/spec_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitParse = 4;

// 5/sqrt(N): 0.005 at the default N = 1e6, about 3.7x the 95% KS quantile
double ks_threshold(std::size_t samples) {
    return 5.0 / std::sqrt(static_cast<double>(samples));
}

void emit(const fs::path& out_dir, const std::string& filename, const json& doc) {
    ym::write_text_atomic(out_dir / filename, doc.dump(2) + "\n");
}

json envelope(const std::string& command, const std::string& source) {
    return json{{"schema", "ym/1"}, {"command", command}, {"source", source}};
}

ym::ValidationReport require_structurally_valid(const ym::PartitionedFunction& u) {
    ym::ValidationReport rep = ym::validate(u);
    if (!rep.ok()) throw ym::ValidationError(rep);
    return rep;
}

std::vector<fs::path> list_spec_files(const fs::path& dir) {
    if (!fs::is_directory(dir))
        throw fs::filesystem_error("not a directory", dir,
                                   std::make_error_code(std::errc::not_a_directory));
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

struct Sequence {
    ym::MeasureSequence densities;
    ym::MeasureSequence measures;
    ym::SupportInterval common{0.0, 1.0};
};

ym::SupportInterval intersect_supports(const std::vector<ym::SupportInterval>& ks) {
    double lo = ks.front().lo(), hi = ks.front().hi();
    for (const auto& k : ks) {
        lo = std::max(lo, k.lo());
        hi = std::min(hi, k.hi());
    }
    if (!(lo < hi))
        throw ym::SpecParseError("sequence supports have empty intersection");
    return {lo, hi};
}

// --------------------------------------------------------------------------
// compute
// --------------------------------------------------------------------------

int cmd_compute(const fs::path& spec_path, std::size_t grid, const fs::path& out_dir) {
    const ym::FunctionSpecDoc doc = ym::load_spec_doc(spec_path);
    fs::create_directories(out_dir);

    json report = envelope("compute", doc.name);
    report["K"] = {doc.K.lo(), doc.K.hi()};
    report["grid_points"] = grid;

    std::vector<ym::HomogeneousYoungMeasure> reps;
    if (doc.kind == ym::SpecKind::Density) {
        reps.push_back(ym::build_density_measure(doc));
    } else {
        const ym::PartitionedFunction u = ym::build_function(doc);
        report["validation"] = ym::validation_json(require_structurally_valid(u));
        reps = ym::build_representations(u, doc.K);
    }

    json jreps = json::array();
    for (const auto& nu : reps) jreps.push_back(ym::measure_json(nu, grid));
    report["representations"] = jreps;

    emit(out_dir, doc.name + ".measure.json", report);
    if (reps.front().variant() == ym::HomogeneousYoungMeasure::Variant::AbsCont)
        ym::write_text_atomic(out_dir / (doc.name + ".density.csv"),
                              ym::density_grid_csv(reps.front(), grid));
    ym::write_text_atomic(out_dir / (doc.name + ".cdf.csv"), ym::cdf_grid_csv(reps, grid));

    std::cout << "compute: " << doc.name << " -> " << (out_dir / (doc.name + ".measure.json")).string()
              << " (" << reps.size() << " representation" << (reps.size() == 1 ? "" : "s") << ")\n";
    return kExitOk;
}

// --------------------------------------------------------------------------
// verify
// --------------------------------------------------------------------------

// A density document has no underlying function, so the only verifiable
// claim is that it is a probability density.
int verify_density_document(const ym::FunctionSpecDoc& doc, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    const auto nu = ym::build_density_measure(doc);
    const double mass = nu.total_mass(1e-10);
    const bool pass = std::abs(mass - 1.0) <= 1e-9;

    json report = envelope("verify", doc.name);
    report["normalization"] = {{"total_mass", mass}, {"tol", 1e-9}, {"pass", pass}};
    report["pass"] = pass;
    emit(out_dir, doc.name + ".verify.json", report);

    if (!pass) {
        std::cerr << "FAIL normalization (mass " << mass << ")\n";
        return kExitCheckFailed;
    }
    std::cout << "verify: " << doc.name << " is a probability density (mass " << mass << ")\n";
    return kExitOk;
}

int cmd_verify(const fs::path& spec_path, const std::vector<std::string>& extra_betas,
               double tol, std::size_t samples, std::uint64_t seed, std::size_t grid,
               const fs::path& out_dir, bool dump_samples) {
    const ym::FunctionSpecDoc doc = ym::load_spec_doc(spec_path);
    if (doc.kind == ym::SpecKind::Density) return verify_density_document(doc, out_dir);
    const ym::PartitionedFunction u = ym::build_function(doc);
    require_structurally_valid(u);
    fs::create_directories(out_dir);

    std::vector<ym::TestFunction> suite = ym::default_test_suite();
    for (const std::string& src : extra_betas)
        suite.push_back(ym::TestFunction::from_source(src));

    const auto reps = ym::build_representations(u, doc.K);
    const auto& natural = reps.front();

    std::vector<std::string> failures;

    const ym::IdentityReport identity =
        ym::verify_fundamental_identity(u, natural, suite, tol);
    for (const auto& c : identity.checks)
        if (!c.pass)
            failures.push_back("identity beta=" + c.beta_label +
                               (c.error.empty() ? "" : " (" + c.error + ")"));

    const ym::CrossReport cross = ym::cross_validate(u, doc.K, 1e-9, grid);
    for (const auto& p : cross.pairs)
        if (!p.pass) failures.push_back("cross " + p.rep_a + " vs " + p.rep_b);

    for (const auto& nu : reps) {
        const double mass = nu.total_mass(1e-9);
        if (std::abs(mass - 1.0) > 1e-9)
            failures.push_back(std::string("normalization ") + nu.variant_name() +
                               " (mass " + std::to_string(mass) + ")");
    }

    const ym::EmpiricalSample sample = ym::monte_carlo_pushforward(u, samples, seed);
    const double threshold = ks_threshold(samples);
    json jks = json::array();
    for (const auto& nu : reps) {
        const double dist = ym::ks_distance(sample, nu);
        const bool pass = dist < threshold;
        jks.push_back({{"representation", nu.variant_name()},
                       {"distance", dist},
                       {"threshold", threshold},
                       {"samples", samples},
                       {"seed", seed},
                       {"pass", pass}});
        if (!pass)
            failures.push_back(std::string("ks ") + nu.variant_name() + " (distance " +
                               std::to_string(dist) + ")");
    }

    json report = envelope("verify", doc.name);
    report["identity"] = ym::identity_json(identity);
    report["cross"] = ym::cross_json(cross);
    report["ks"] = jks;
    report["pass"] = failures.empty();
    emit(out_dir, doc.name + ".verify.json", report);
    if (dump_samples)
        ym::write_sample_csv(sample, out_dir / (doc.name + ".samples.csv"));

    if (!failures.empty()) {
        for (const auto& f : failures) std::cerr << "FAIL " << f << "\n";
        return kExitCheckFailed;
    }
    std::cout << "verify: " << doc.name << " passed (" << identity.checks.size()
              << " betas, " << reps.size() << " representations, KS threshold "
              << threshold << ")\n";
    return kExitOk;
}

// --------------------------------------------------------------------------
// converge
// --------------------------------------------------------------------------

Sequence build_sequence_from_dir(const fs::path& dir, bool densities_mode) {
    const auto files = list_spec_files(dir);
    if (files.size() < 2)
        throw ym::SpecParseError("converge: need at least two spec documents in " +
                                 dir.string());
    Sequence seq;
    std::vector<ym::SupportInterval> supports;
    for (const fs::path& f : files) {
        const ym::FunctionSpecDoc doc = ym::load_spec_doc(f);
        if (densities_mode || doc.kind == ym::SpecKind::Density) {
            if (doc.kind != ym::SpecKind::Density)
                throw ym::SpecParseError(doc.name + ": expected a density document");
            const auto nu = ym::build_density_measure(doc);
            seq.densities.elements.push_back(nu);
            seq.measures.elements.push_back(nu);
        } else {
            const ym::PartitionedFunction u = ym::build_function(doc);
            seq.densities.elements.push_back(ym::density_young_measure(u, doc.K));
            seq.measures.elements.push_back(ym::pushforward_young_measure(u, doc.K));
        }
        seq.densities.labels.push_back(doc.name);
        seq.measures.labels.push_back(doc.name);
        supports.push_back(seq.densities.elements.back().support());
    }
    seq.common = intersect_supports(supports);
    return seq;
}

Sequence build_sequence_from_oscillation(const fs::path& base_path, std::size_t levels) {
    const ym::FunctionSpecDoc doc = ym::load_spec_doc(base_path);
    if (doc.kind == ym::SpecKind::Density)
        throw ym::SpecParseError(doc.name + ": --oscillate needs a function document");
    const ym::PartitionedFunction base = ym::build_function(doc);

    Sequence seq;
    for (std::size_t k = 0; k <= levels; ++k) {
        const std::size_t l = std::size_t{1} << k;
        const ym::PartitionedFunction ul = ym::oscillating_sequence(base, l);
        seq.densities.elements.push_back(ym::density_young_measure(ul, doc.K));
        seq.measures.elements.push_back(ym::pushforward_young_measure(ul, doc.K));
        const std::string label = "l=" + std::to_string(l);
        seq.densities.labels.push_back(label);
        seq.measures.labels.push_back(label);
    }
    seq.common = doc.K;
    return seq;
}

int cmd_converge(const std::string& dir, const std::string& oscillate_base,
                 std::size_t levels, std::size_t depth, double tol, double limit_tol,
                 std::size_t window, bool densities_mode, const fs::path& out_dir) {
    if (dir.empty() == oscillate_base.empty())
        throw ym::SpecParseError("converge: pass a spec directory or --oscillate, not both");

    const Sequence seq = dir.empty()
                             ? build_sequence_from_oscillation(oscillate_base, levels)
                             : build_sequence_from_dir(dir, densities_mode);
    const ym::TestSetFamily family = ym::generate_test_sets(seq.common, depth);
    fs::create_directories(out_dir);

    const ym::ConvergenceReport dens =
        ym::weak_l1_probe(seq.densities, family, tol, window);
    const ym::ConvergenceReport meas =
        ym::weak_measure_probe(seq.measures, family, tol, window);
    const ym::EquivalenceReport eq = ym::equivalence_check(dens, meas, limit_tol);

    {
        json jd = envelope("converge", dir.empty() ? oscillate_base : dir);
        jd["probe"] = "weak-l1-densities";
        jd["family"] = {{"K", {seq.common.lo(), seq.common.hi()}}, {"depth", depth},
                        {"sets", family.sets.size()}};
        jd["report"] = ym::convergence_json(dens, seq.densities.labels);
        emit(out_dir, "converge.density.json", jd);

        json jm = envelope("converge", dir.empty() ? oscillate_base : dir);
        jm["probe"] = "weak-measures";
        jm["family"] = jd["family"];
        jm["report"] = ym::convergence_json(meas, seq.measures.labels);
        emit(out_dir, "converge.measure.json", jm);

        json je = envelope("converge", dir.empty() ? oscillate_base : dir);
        je["report"] = ym::equivalence_json(eq);
        emit(out_dir, "converge.equivalence.json", je);

        ym::write_text_atomic(out_dir / "converge.density_values.csv",
                              ym::value_matrix_csv(dens, seq.densities.labels));
        ym::write_text_atomic(out_dir / "converge.measure_values.csv",
                              ym::value_matrix_csv(meas, seq.measures.labels));
    }

    std::cout << "converge: densities " << ym::verdict_name(dens.verdict) << ", measures "
              << ym::verdict_name(meas.verdict) << ", equivalence "
              << (eq.ok() ? "ok" : "VIOLATION") << "\n";
    if (!eq.annotation.empty()) std::cout << "note: " << eq.annotation << "\n";
    if (!eq.ok()) {
        std::cerr << "FAIL equivalence: " << eq.annotation << "\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

// --------------------------------------------------------------------------
// scenario-monotone
// --------------------------------------------------------------------------

int cmd_scenario_monotone(const fs::path& dir, std::size_t depth, double tol,
                          std::size_t window, const fs::path& out_dir) {
    const auto files = list_spec_files(dir);
    if (files.size() < 2)
        throw ym::SpecParseError("scenario-monotone: need at least two spec documents in " +
                                 dir.string());

    ym::MeasureSequence seq;
    std::vector<ym::SupportInterval> supports;
    for (const fs::path& f : files) {
        const ym::FunctionSpecDoc doc = ym::load_spec_doc(f);
        if (doc.kind == ym::SpecKind::Density) {
            seq.elements.push_back(ym::build_density_measure(doc));
        } else {
            const ym::PartitionedFunction u = ym::build_function(doc);
            if (u.pieces().size() != 1 || u.pieces().front().direction() <= 0) {
                ym::ValidationReport rep;
                rep.entries.push_back({doc.name + "-single-increasing-piece", false,
                                       "the scenario needs single-piece strictly increasing functions"});
                throw ym::ValidationError(rep);
            }
            seq.elements.push_back(ym::density_young_measure(u, doc.K));
        }
        seq.labels.push_back(doc.name);
        supports.push_back(seq.elements.back().support());
    }

    const ym::SupportInterval common = intersect_supports(supports);
    const ym::TestSetFamily family = ym::generate_test_sets(common, depth);
    fs::create_directories(out_dir);

    const ym::ScenarioReport report =
        ym::monotone_density_scenario(seq, family, tol, window);

    json jr = envelope("scenario-monotone", dir.string());
    jr["family"] = {{"K", {common.lo(), common.hi()}}, {"depth", depth},
                    {"sets", family.sets.size()}};
    jr["report"] = ym::scenario_json(report, seq.labels);
    emit(out_dir, "scenario.json", jr);

    if (!report.ok()) {
        if (!report.witnesses.empty())
            std::cerr << "FAIL monotonicity: witness set " << report.witnesses.front().set_label
                      << " (value " << report.witnesses.front().value_from << " -> "
                      << report.witnesses.front().value_to << ")\n";
        else if (!report.bounded_ok)
            std::cerr << "FAIL boundedness: max per-set value " << report.max_value << "\n";
        else
            std::cerr << "FAIL probe verdict: " << ym::verdict_name(report.probe.verdict) << "\n";
        return kExitCheckFailed;
    }
    std::cout << "scenario-monotone: monotone, bounded, probe "
              << ym::verdict_name(report.probe.verdict) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"homogeneous Young measures of piecewise functions: construction, "
                 "verification, weak-convergence probes"};
    app.require_subcommand(1);

    std::string out_dir = "./ym-out";
    app.add_option("-o,--out", out_dir, "output directory for reports")
        ->capture_default_str();

    // compute
    auto* compute = app.add_subcommand("compute", "build every applicable representation "
                                                  "and write measure reports and grids");
    std::string compute_spec;
    std::size_t grid = 1025;
    compute->add_option("spec", compute_spec, "function-spec JSON document")->required();
    compute->add_option("--grid", grid, "report grid points")->capture_default_str();

    // verify
    auto* verify = app.add_subcommand("verify", "fundamental identity, representation "
                                                "agreement, and Monte-Carlo KS checks");
    std::string verify_spec;
    std::vector<std::string> betas;
    double verify_tol = 1e-7;
    std::size_t samples = 1'000'000;
    std::uint64_t seed = 42;
    bool dump_samples = false;
    verify->add_option("spec", verify_spec, "function-spec JSON document")->required();
    verify->add_option("--beta", betas, "extra test function over y (repeatable)");
    verify->add_option("--tol", verify_tol, "identity tolerance")->capture_default_str();
    verify->add_option("--samples", samples, "Monte-Carlo sample count")->capture_default_str();
    verify->add_option("--seed", seed, "Monte-Carlo seed")->capture_default_str();
    verify->add_option("--grid", grid, "CDF comparison grid")->capture_default_str();
    verify->add_flag("--dump-samples", dump_samples, "also write the sorted sample CSV");

    // converge
    auto* converge = app.add_subcommand("converge", "weak-convergence probes over a sequence "
                                                    "plus the density/measure equivalence check");
    std::string converge_dir;
    std::string oscillate_base;
    std::size_t levels = 6;
    std::size_t depth = 4;
    double converge_tol = 1e-6;
    double limit_tol = 1e-6;
    std::size_t window = 3;
    bool densities_mode = false;
    converge->add_option("dir", converge_dir, "directory of numbered spec documents");
    converge->add_option("--oscillate", oscillate_base,
                         "base spec: probe its periodic rescalings l = 1, 2, 4, ...");
    converge->add_option("--levels", levels, "highest rescaling exponent")->capture_default_str();
    converge->add_option("--depth", depth, "dyadic test-set depth")->capture_default_str();
    converge->add_option("--tol", converge_tol, "Cauchy residual tolerance")->capture_default_str();
    converge->add_option("--limit-tol", limit_tol, "density/measure limit agreement tolerance")
        ->capture_default_str();
    converge->add_option("--window", window, "tail window length")->capture_default_str();
    converge->add_flag("--densities", densities_mode,
                       "documents supply densities over y instead of functions of x");

    // scenario-monotone
    auto* scenario = app.add_subcommand("scenario-monotone",
                                        "monotone-density scenario over a directory of "
                                        "single-piece increasing specs");
    std::string scenario_dir;
    scenario->add_option("dir", scenario_dir, "directory of spec documents")->required();
    scenario->add_option("--depth", depth, "dyadic test-set depth")->capture_default_str();
    scenario->add_option("--tol", converge_tol, "tolerance")->capture_default_str();
    scenario->add_option("--window", window, "tail window length")->capture_default_str();

    // accept -o after the subcommand as well
    for (auto* sub : {compute, verify, converge, scenario}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    try {
        if (app.got_subcommand(compute))
            return cmd_compute(compute_spec, grid, out_dir);
        if (app.got_subcommand(verify))
            return cmd_verify(verify_spec, betas, verify_tol, samples, seed, grid, out_dir,
                              dump_samples);
        if (app.got_subcommand(converge))
            return cmd_converge(converge_dir, oscillate_base, levels, depth, converge_tol,
                                limit_tol, window, densities_mode, out_dir);
        if (app.got_subcommand(scenario))
            return cmd_scenario_monotone(scenario_dir, depth, converge_tol, window, out_dir);
    } catch (const ym::SpecParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ym::ParseError& e) {
        std::cerr << "expression error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ym::ValidationError& e) {
        std::cerr << "validation failure:\n" << e.report().summary();
        return kExitValidation;
    } catch (const ym::EvalDomainError& e) {
        std::cerr << "validation failure: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation failure: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}
