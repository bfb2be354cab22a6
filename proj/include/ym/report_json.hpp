#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ym/construct.hpp"
#include "ym/convergence.hpp"
#include "ym/measure.hpp"
#include "ym/piecewise.hpp"

namespace ym {

// Report JSON fragments; the CLI wraps them in {"schema": "ym/1", ...}
// envelopes. Non-finite grid samples (a density at its singular endpoint)
// serialize as null; the singular-endpoint list identifies them.

nlohmann::json validation_json(const ValidationReport& report);

// variant, support, total mass, atoms or sampled density/CDF grids
nlohmann::json measure_json(const HomogeneousYoungMeasure& nu, std::size_t grid_points);

nlohmann::json identity_json(const IdentityReport& report);
nlohmann::json cross_json(const CrossReport& report);
nlohmann::json convergence_json(const ConvergenceReport& report,
                                const std::vector<std::string>& element_labels);
nlohmann::json equivalence_json(const EquivalenceReport& report);
nlohmann::json scenario_json(const ScenarioReport& report,
                             const std::vector<std::string>& element_labels);

// "y,g" rows over a uniform grid on the support
std::string density_grid_csv(const HomogeneousYoungMeasure& nu, std::size_t grid_points);

// "y,<variant>,<variant>,..." CDF columns for several representations of one
// measure
std::string cdf_grid_csv(const std::vector<HomogeneousYoungMeasure>& reps,
                         std::size_t grid_points);

// rows = test sets, columns = sequence elements
std::string value_matrix_csv(const ConvergenceReport& report,
                             const std::vector<std::string>& element_labels);

// write-to-temp-then-rename so report files never appear half-written
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace ym
