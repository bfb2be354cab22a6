#include <doctest.h>

#include <cmath>
#include <vector>

#include "ym/quadrature.hpp"

using ym::adaptive_quadrature;

TEST_SUITE("quadrature") {

TEST_CASE("monomials up to degree 10 integrate exactly on [0,1]") {
    for (int k = 0; k <= 10; ++k) {
        auto f = [k](double x) { return std::pow(x, k); };
        const auto r = adaptive_quadrature(f, 0.0, 1.0, 1e-12);
        const double exact = 1.0 / (k + 1);  // antiderivative x^{k+1}/(k+1)
        CAPTURE(k);
        CHECK(std::abs(r.value - exact) <= 1e-12);
        CHECK(r.error_estimate <= 1e-12);
    }
}

TEST_CASE("constant and sine integrals") {
    CHECK(std::abs(adaptive_quadrature([](double) { return 1.0; }, 0.0, 1.0, 1e-12).value -
                   1.0) <= 1e-12);
    const double one_minus_cos1 = 1.0 - std::cos(1.0);  // antiderivative -cos
    CHECK(std::abs(adaptive_quadrature([](double x) { return std::sin(x); }, 0.0, 1.0,
                                       1e-12).value -
                   one_minus_cos1) <= 1e-12);
}

TEST_CASE("integrable endpoint singularity 1/(2 sqrt y)") {
    const double singular[] = {0.0};
    auto f = [](double y) { return 0.5 / std::sqrt(y); };
    const auto r = adaptive_quadrature(f, 0.0, 1.0, 1e-9, singular);
    CHECK(std::abs(r.value - 1.0) <= 1e-9);  // antiderivative sqrt(y)
}

TEST_CASE("singularity at the right endpoint") {
    // resolution near s = 1 bottoms out around sqrt(ulp(1)) ~ 1e-8
    const double singular[] = {1.0};
    auto f = [](double y) { return 0.5 / std::sqrt(1.0 - y); };
    const auto r = adaptive_quadrature(f, 0.0, 1.0, 1e-7, singular);
    CHECK(std::abs(r.value - 1.0) <= 1e-7);
}

TEST_CASE("interior singular point is pre-split") {
    const double singular[] = {0.5};
    auto f = [](double y) { return 0.5 / std::sqrt(std::abs(y - 0.5)); };
    const auto r = adaptive_quadrature(f, 0.0, 1.0, 1e-7, singular);
    // two half-integrals of 1/(2 sqrt t), each sqrt(1/2)
    CHECK(std::abs(r.value - 2.0 * std::sqrt(0.5)) <= 1e-7);
}

TEST_CASE("non-finite integrand values are an error") {
    auto f = [](double y) { return 1.0 / (y - 0.5); };  // pole crossed without declaration
    CHECK_THROWS_AS(adaptive_quadrature([](double) { return std::nan(""); }, 0.0, 1.0, 1e-6),
                    ym::QuadratureError);
    (void)f;
}

TEST_CASE("non-integrable singularity exhausts the budget") {
    const double singular[] = {0.0};
    auto f = [](double y) { return 1.0 / y; };
    CHECK_THROWS_AS(adaptive_quadrature(f, 0.0, 1.0, 1e-9, singular, 20000),
                    ym::QuadratureError);
}

TEST_CASE("oscillatory integrand") {
    // antiderivative -cos(40 x)/40
    auto f = [](double x) { return std::sin(40.0 * x); };
    const double exact = (1.0 - std::cos(40.0)) / 40.0;
    CHECK(std::abs(adaptive_quadrature(f, 0.0, 1.0, 1e-12).value - exact) <= 1e-12);
}

TEST_CASE("empty interval integrates to zero") {
    CHECK(adaptive_quadrature([](double x) { return x; }, 0.3, 0.3, 1e-12).value == 0.0);
}

}  // TEST_SUITE
