#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ym/construct.hpp"
#include "ym/sampling.hpp"
#include "ym/spec_io.hpp"

using ym::HomogeneousYoungMeasure;
using ym::SupportInterval;

namespace {

ym::PartitionedFunction load_fixture(const char* name) {
    return ym::build_function(
        ym::load_spec_doc(std::string(YM_FIXTURE_DIR) + "/" + name));
}

}  // namespace

TEST_SUITE("sampling") {

TEST_CASE("identical seed reproduces the sample bit for bit") {
    const auto u = load_fixture("sawtooth.json");
    const auto s1 = ym::monte_carlo_pushforward(u, 5000, 42u);
    const auto s2 = ym::monte_carlo_pushforward(u, 5000, 42u);
    CHECK(s1.values == s2.values);

    const auto s3 = ym::monte_carlo_pushforward(u, 5000, 43u);
    CHECK(s1.values != s3.values);
}

TEST_CASE("constant function maps every draw to the constant") {
    std::vector<ym::Piece> ps;
    ps.push_back(ym::Piece::make({0.0, 1.0}, ym::Expr::constant(0.25)));
    const ym::PartitionedFunction u({0.0, 1.0}, ym::FunctionKind::PiecewiseConstant,
                                    std::move(ps));
    const auto s = ym::monte_carlo_pushforward(u, 1000, 1u);
    for (double v : s.values) CHECK(v == 0.25);

    const auto nu = ym::atomic_young_measure(u, SupportInterval(0.0, 1.0));
    CHECK(ym::ks_distance(s, nu) == doctest::Approx(0.0));
}

TEST_CASE("identity map: empirical CDF is uniform within the KS band") {
    const auto u = load_fixture("identity.json");
    const auto s = ym::monte_carlo_pushforward(u, 200000, 42u);
    const auto nu = ym::density_young_measure(u, SupportInterval(0.0, 1.0));
    // 5/sqrt(N) band, the same margin the acceptance run uses at N = 1e6
    CHECK(ym::ks_distance(s, nu) < 5.0 / std::sqrt(200000.0));
}

TEST_CASE("x^2 sample tracks the sqrt CDF") {
    const auto u = load_fixture("xsq.json");
    const auto s = ym::monte_carlo_pushforward(u, 200000, 42u);

    // direct empirical quantile check against F(y) = sqrt(y)
    const auto& v = s.values;
    for (double y : {0.04, 0.25, 0.64}) {
        const auto it = std::lower_bound(v.begin(), v.end(), y);
        const double emp = static_cast<double>(it - v.begin()) / v.size();
        CHECK(std::abs(emp - std::sqrt(y)) < 0.01);
    }

    const auto nu = ym::density_young_measure(u, SupportInterval(0.0, 1.0));
    CHECK(ym::ks_distance(s, nu) < 5.0 / std::sqrt(200000.0));

    const auto push = ym::pushforward_young_measure(u, SupportInterval(0.0, 1.0));
    CHECK(ym::ks_distance(s, push) < 5.0 / std::sqrt(200000.0));
}

TEST_CASE("a spread-out sample against a point mass approaches distance 1") {
    const auto u = load_fixture("identity.json");
    const auto s = ym::monte_carlo_pushforward(u, 20000, 9u);
    const auto point = HomogeneousYoungMeasure::atomic(SupportInterval(0.0, 1.0),
                                                       {ym::Atom{0.0, 1.0}});
    CHECK(ym::ks_distance(s, point) > 0.99);
}

TEST_CASE("wrong density is detected far beyond the band") {
    const auto u = load_fixture("xsq.json");  // true CDF sqrt(y)
    const auto s = ym::monte_carlo_pushforward(u, 50000, 11u);
    const auto wrong = HomogeneousYoungMeasure::absolutely_continuous(
        SupportInterval(0.0, 1.0), [](double) { return 1.0; });  // claims uniform
    CHECK(ym::ks_distance(s, wrong) > 0.2);
}

TEST_CASE("sample CSV is a single value column") {
    const auto u = load_fixture("identity.json");
    const auto s = ym::monte_carlo_pushforward(u, 100, 3u);
    const auto path = std::filesystem::temp_directory_path() / "ym_sample_test.csv";
    ym::write_sample_csv(s, path);
    std::ifstream in(path);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "value");
    std::size_t rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 100);
    std::filesystem::remove(path);
}

}  // TEST_SUITE
