#include <doctest.h>

#include "ym/spec_io.hpp"

using ym::parse_spec_doc;
using ym::SpecKind;
using ym::SpecParseError;

TEST_SUITE("spec_io") {

TEST_CASE("a well-formed document parses into cells and sources") {
    const char* text = R"({
        "domain": [0, 1],
        "kind": "invertible",
        "pieces": [
            { "interval": [0, 0.5], "expr": "2*x" },
            { "interval": [0.5, 1], "expr": "2 - 2*x" }
        ],
        "K": [0, 1]
    })";
    const auto doc = parse_spec_doc(text, "saw");
    CHECK(doc.kind == SpecKind::Invertible);
    CHECK(doc.domain.lo == 0.0);
    CHECK(doc.domain.hi == 1.0);
    CHECK(doc.K.lo() == 0.0);
    CHECK(doc.K.hi() == 1.0);
    REQUIRE(doc.pieces.size() == 2);
    CHECK(doc.pieces[0].second == "2*x");

    const auto u = ym::build_function(doc);
    CHECK(u.pieces().size() == 2);
    CHECK(ym::validate(u, doc.K).ok());
}

TEST_CASE("malformed documents are parse errors") {
    CHECK_THROWS_AS(parse_spec_doc("not json", "x"), SpecParseError);
    CHECK_THROWS_AS(parse_spec_doc("[1,2]", "x"), SpecParseError);
    CHECK_THROWS_AS(parse_spec_doc(R"({"domain":[0,1],"kind":"invertible","pieces":[]})", "x"),
                    SpecParseError);  // missing K
    CHECK_THROWS_AS(parse_spec_doc(
                        R"({"domain":[0,1],"kind":"bogus","pieces":[{"interval":[0,1],"expr":"x"}],"K":[0,1]})",
                        "x"),
                    SpecParseError);
    CHECK_THROWS_AS(parse_spec_doc(
                        R"({"domain":[0,1],"kind":"invertible","pieces":[],"K":[0,1]})", "x"),
                    SpecParseError);  // empty pieces
    CHECK_THROWS_AS(parse_spec_doc(
                        R"({"domain":[0,1],"kind":"invertible","pieces":[{"interval":[0],"expr":"x"}],"K":[0,1]})",
                        "x"),
                    SpecParseError);  // interval not a pair
    CHECK_THROWS_AS(parse_spec_doc(
                        R"({"domain":[0,1],"kind":"invertible","pieces":[{"interval":[0,1],"expr":"x"}],"K":[1,0]})",
                        "x"),
                    SpecParseError);  // K reversed
}

TEST_CASE("expression syntax errors surface when building the function") {
    const auto doc = parse_spec_doc(
        R"({"domain":[0,1],"kind":"invertible","pieces":[{"interval":[0,1],"expr":"2*"}],"K":[0,1]})",
        "x");
    CHECK_THROWS_AS(ym::build_function(doc), ym::ParseError);
}

TEST_CASE("density documents") {
    const char* text = R"({
        "domain": [0, 1],
        "kind": "density",
        "pieces": [ { "interval": [0, 1], "expr": "2*y" } ],
        "K": [0, 1]
    })";
    const auto doc = parse_spec_doc(text, "lin");
    CHECK(doc.kind == SpecKind::Density);
    const auto nu = ym::build_density_measure(doc);
    CHECK(nu.density_at(0.5) == doctest::Approx(1.0));
    CHECK(nu.total_mass(1e-10) == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(ym::build_function(doc), std::invalid_argument);

    // density documents must satisfy domain == K == piece interval
    CHECK_THROWS_AS(parse_spec_doc(
                        R"({"domain":[0,2],"kind":"density","pieces":[{"interval":[0,1],"expr":"2*y"}],"K":[0,1]})",
                        "x"),
                    SpecParseError);
}

}  // TEST_SUITE
