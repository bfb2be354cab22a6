#include "ym/spec_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ym {

namespace {

using nlohmann::json;

Interval read_interval(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw SpecParseError("field '" + field + "' must be a two-number array");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

FunctionSpecDoc parse_spec_doc(const std::string& text, const std::string& name) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SpecParseError(name + ": " + e.what());
    }
    if (!j.is_object()) throw SpecParseError(name + ": document must be a JSON object");

    FunctionSpecDoc doc;
    doc.name = name;

    for (const char* field : {"domain", "kind", "pieces", "K"})
        if (!j.contains(field))
            throw SpecParseError(name + ": missing field '" + std::string(field) + "'");

    doc.domain = read_interval(j["domain"], "domain");

    const Interval k = read_interval(j["K"], "K");
    if (!(k.lo < k.hi)) throw SpecParseError(name + ": K must satisfy c < d");
    doc.K = SupportInterval(k.lo, k.hi);

    const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
    if (kind == "invertible")
        doc.kind = SpecKind::Invertible;
    else if (kind == "constant")
        doc.kind = SpecKind::Constant;
    else if (kind == "density")
        doc.kind = SpecKind::Density;
    else
        throw SpecParseError(name + ": kind must be \"invertible\", \"constant\" or \"density\"");

    if (!j["pieces"].is_array() || j["pieces"].empty())
        throw SpecParseError(name + ": 'pieces' must be a non-empty array");
    for (const json& pj : j["pieces"]) {
        if (!pj.is_object() || !pj.contains("interval") || !pj.contains("expr") ||
            !pj["expr"].is_string())
            throw SpecParseError(name + ": each piece needs 'interval' and string 'expr'");
        doc.pieces.emplace_back(read_interval(pj["interval"], "interval"),
                                pj["expr"].get<std::string>());
    }

    if (doc.kind == SpecKind::Density) {
        if (doc.pieces.size() != 1)
            throw SpecParseError(name + ": a density document carries exactly one piece");
        const Interval& cell = doc.pieces.front().first;
        const double tol = 1e-12 * std::max(1.0, doc.K.length());
        if (std::abs(cell.lo - doc.K.lo()) > tol || std::abs(cell.hi - doc.K.hi()) > tol ||
            std::abs(doc.domain.lo - doc.K.lo()) > tol ||
            std::abs(doc.domain.hi - doc.K.hi()) > tol)
            throw SpecParseError(name + ": a density document must have domain == K == piece interval");
    }
    return doc;
}

FunctionSpecDoc load_spec_doc(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::filesystem::filesystem_error(
            "cannot read spec document", path,
            std::make_error_code(std::errc::no_such_file_or_directory));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec_doc(buf.str(), path.stem().string());
}

PartitionedFunction build_function(const FunctionSpecDoc& doc) {
    if (doc.kind == SpecKind::Density)
        throw std::invalid_argument(doc.name + ": density documents do not define a function of x");
    std::vector<Piece> pieces;
    pieces.reserve(doc.pieces.size());
    for (const auto& [cell, source] : doc.pieces)
        pieces.push_back(Piece::make(cell, parse_expression(source)));
    const FunctionKind kind = doc.kind == SpecKind::Constant
                                  ? FunctionKind::PiecewiseConstant
                                  : FunctionKind::PiecewiseInvertible;
    return PartitionedFunction(doc.domain, kind, std::move(pieces));
}

HomogeneousYoungMeasure build_density_measure(const FunctionSpecDoc& doc) {
    if (doc.kind != SpecKind::Density)
        throw std::invalid_argument(doc.name + ": not a density document");
    const Expr g = parse_expression(doc.pieces.front().second, "y");
    return HomogeneousYoungMeasure::absolutely_continuous(
        doc.K, [g](double y) { return g.eval(y); });
}

}  // namespace ym
