#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ym/interval.hpp"
#include "ym/measure.hpp"
#include "ym/piecewise.hpp"

namespace ym {

// Malformed document: unreadable JSON, missing or ill-typed fields,
// unparseable expressions.
class SpecParseError : public std::runtime_error {
public:
    explicit SpecParseError(const std::string& what) : std::runtime_error(what) {}
};

enum class SpecKind { Invertible, Constant, Density };

// A function-spec document:
//   { "domain": [a, b],
//     "kind": "invertible" | "constant" | "density",
//     "pieces": [ { "interval": [a1, b1], "expr": "2*x" }, ... ],
//     "K": [c, d] }
//
// "invertible" and "constant" describe a function of x on the partitioned
// domain. "density" is the sequence-input extension: one piece whose
// expression is a probability density in y on K (domain must equal K).
struct FunctionSpecDoc {
    std::string name;  // file stem; used for output naming
    SpecKind kind = SpecKind::Invertible;
    Interval domain;
    SupportInterval K{0.0, 1.0};
    std::vector<std::pair<Interval, std::string>> pieces;  // cell + expression source
};

FunctionSpecDoc parse_spec_doc(const std::string& text, const std::string& name);
FunctionSpecDoc load_spec_doc(const std::filesystem::path& path);

// Builds the partitioned function of a function-kind document. Expression
// syntax errors surface as ParseError; everything else that is wrong with
// the document shows up in validate() afterwards.
PartitionedFunction build_function(const FunctionSpecDoc& doc);

// Builds the density measure of a "density" document (no normalization
// check here; probes enforce unit mass).
HomogeneousYoungMeasure build_density_measure(const FunctionSpecDoc& doc);

}  // namespace ym
