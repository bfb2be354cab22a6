#include "ym/report_json.hpp"

#include <cstdio>
#include <fstream>

namespace ym {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json grid_points_json(const SupportInterval& K, std::size_t n) {
    json ys = json::array();
    for (std::size_t k = 0; k < n; ++k)
        ys.push_back(K.lo() + K.length() * static_cast<double>(k) /
                                 static_cast<double>(n - 1));
    return ys;
}

}  // namespace

json validation_json(const ValidationReport& report) {
    json entries = json::array();
    for (const auto& e : report.entries)
        entries.push_back({{"condition", e.condition}, {"pass", e.pass}, {"detail", e.detail}});
    return {{"entries", entries}, {"pass", report.ok()}};
}

json measure_json(const HomogeneousYoungMeasure& nu, std::size_t grid_points) {
    const SupportInterval& K = nu.support();
    json out{{"variant", nu.variant_name()},
             {"support", {K.lo(), K.hi()}},
             {"total_mass", nu.total_mass(1e-9)}};

    if (nu.variant() == HomogeneousYoungMeasure::Variant::Atomic) {
        json atoms = json::array();
        for (const Atom& a : nu.atoms())
            atoms.push_back({{"point", a.point}, {"weight", a.weight}});
        out["atoms"] = atoms;
    }

    if (nu.variant() == HomogeneousYoungMeasure::Variant::AbsCont) {
        out["singular_endpoints"] = json(std::vector<double>(
            nu.singular_endpoints().begin(), nu.singular_endpoints().end()));
        json g = json::array();
        for (std::size_t k = 0; k < grid_points; ++k) {
            const double y = K.lo() + K.length() * static_cast<double>(k) /
                                          static_cast<double>(grid_points - 1);
            g.push_back(nu.density_at(y));  // non-finite values serialize as null
        }
        out["density_grid"] = {{"y", grid_points_json(K, grid_points)}, {"g", g}};
    }

    json F = json::array();
    for (std::size_t k = 0; k < grid_points; ++k) {
        const double y = K.lo() + K.length() * static_cast<double>(k) /
                                      static_cast<double>(grid_points - 1);
        F.push_back(nu.cdf(y));
    }
    out["cdf_grid"] = {{"y", grid_points_json(K, grid_points)}, {"F", F}};
    return out;
}

json identity_json(const IdentityReport& report) {
    json checks = json::array();
    for (const auto& c : report.checks) {
        json jc{{"beta", c.beta_label}, {"lhs", c.lhs},       {"rhs", c.rhs},
                {"abs_diff", c.abs_diff}, {"tol", c.tol},     {"pass", c.pass}};
        if (!c.error.empty()) jc["error"] = c.error;
        checks.push_back(jc);
    }
    return {{"checks", checks}, {"pass", report.ok()}};
}

json cross_json(const CrossReport& report) {
    json pairs = json::array();
    for (const auto& p : report.pairs)
        pairs.push_back({{"rep_a", p.rep_a},
                         {"rep_b", p.rep_b},
                         {"sup_discrepancy", p.sup_discrepancy},
                         {"at_y", p.at_y},
                         {"tol", p.tol},
                         {"pass", p.pass}});
    return {{"grid_points", report.grid_points}, {"pairs", pairs}, {"pass", report.ok()}};
}

json convergence_json(const ConvergenceReport& report,
                      const std::vector<std::string>& element_labels) {
    json sets = json::array();
    for (const auto& s : report.sets) {
        json js{{"set", s.label},
                {"values", s.values},
                {"residual", s.residual},
                {"limit", s.limit},
                {"residual_ok", s.residual_ok},
                {"inconclusive", s.inconclusive}};
        if (!s.note.empty()) js["note"] = s.note;
        sets.push_back(js);
    }
    json out{{"verdict", verdict_name(report.verdict)},
             {"tol", report.tol},
             {"window", report.window},
             {"elements", element_labels},
             {"sets", sets}};
    if (report.uniform_integrability) {
        const auto& ui = *report.uniform_integrability;
        out["uniform_integrability"] = {{"window_fractions", ui.window_fractions},
                                        {"tail_mass", ui.tail_mass},
                                        {"sup_estimates", ui.sup_estimates},
                                        {"growth_ratio", ui.growth_ratio},
                                        {"fired", ui.fired}};
    }
    if (!report.annotation.empty()) out["annotation"] = report.annotation;
    return out;
}

json equivalence_json(const EquivalenceReport& report) {
    const char* outcome = report.outcome == EquivalenceOutcome::Supported
                              ? "supported"
                              : report.outcome == EquivalenceOutcome::AnnotatedInconclusive
                                    ? "annotated-inconclusive"
                                    : "violation";
    json out{{"density_verdict", verdict_name(report.density_verdict)},
             {"measure_verdict", verdict_name(report.measure_verdict)},
             {"verdicts_agree", report.verdicts_agree},
             {"max_limit_gap", report.max_limit_gap},
             {"limits_agree", report.limits_agree},
             {"tol", report.tol},
             {"outcome", outcome},
             {"pass", report.ok()}};
    if (!report.max_gap_set.empty()) out["max_gap_set"] = report.max_gap_set;
    if (!report.annotation.empty()) out["annotation"] = report.annotation;
    return out;
}

json scenario_json(const ScenarioReport& report,
                   const std::vector<std::string>& element_labels) {
    json witnesses = json::array();
    for (const auto& w : report.witnesses)
        witnesses.push_back({{"set", w.set_label},
                             {"from_index", w.from_index},
                             {"to_index", w.to_index},
                             {"value_from", w.value_from},
                             {"value_to", w.value_to}});
    return {{"monotone_ok", report.monotone_ok},
            {"witnesses", witnesses},
            {"bounded_ok", report.bounded_ok},
            {"max_value", report.max_value},
            {"probe", convergence_json(report.probe, element_labels)},
            {"pass", report.ok()}};
}

std::string density_grid_csv(const HomogeneousYoungMeasure& nu, std::size_t grid_points) {
    const SupportInterval& K = nu.support();
    std::string csv = "y,g\n";
    for (std::size_t k = 0; k < grid_points; ++k) {
        const double y = K.lo() + K.length() * static_cast<double>(k) /
                                      static_cast<double>(grid_points - 1);
        csv += fmt17(y) + "," + fmt17(nu.density_at(y)) + "\n";
    }
    return csv;
}

std::string cdf_grid_csv(const std::vector<HomogeneousYoungMeasure>& reps,
                         std::size_t grid_points) {
    if (reps.empty()) return "y\n";
    const SupportInterval& K = reps.front().support();
    std::string csv = "y";
    for (const auto& r : reps) csv += std::string(",") + r.variant_name();
    csv += "\n";
    for (std::size_t k = 0; k < grid_points; ++k) {
        const double y = K.lo() + K.length() * static_cast<double>(k) /
                                      static_cast<double>(grid_points - 1);
        csv += fmt17(y);
        for (const auto& r : reps) csv += "," + fmt17(r.cdf(y));
        csv += "\n";
    }
    return csv;
}

std::string value_matrix_csv(const ConvergenceReport& report,
                             const std::vector<std::string>& element_labels) {
    std::string csv = "set";
    for (const auto& l : element_labels) csv += "," + l;
    csv += "\n";
    for (const auto& s : report.sets) {
        csv += "\"" + s.label + "\"";
        for (double v : s.values) csv += "," + fmt17(v);
        for (std::size_t k = s.values.size(); k < element_labels.size(); ++k) csv += ",";
        csv += "\n";
    }
    return csv;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::filesystem::filesystem_error(
                "cannot open for writing", tmp,
                std::make_error_code(std::errc::permission_denied));
        out << text;
        if (!out)
            throw std::filesystem::filesystem_error(
                "short write", tmp, std::make_error_code(std::errc::io_error));
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace ym
