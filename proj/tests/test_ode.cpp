#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "ergo/ode.hpp"

using namespace ergo;

TEST_CASE("comparison ode closed form, epsilon = 1, no source") {
    // y' = -y^2, y(0) = 1: y(t) = 1/(1+t).
    CHECK(comparison_ode_at({1.0, 1.0, 0.0}, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(comparison_ode_at({1.0, 1.0, 0.0}, 1.0, 3.0) == doctest::Approx(0.25).epsilon(1e-14));
    // General epsilon closed form: y0·(1+eps·k1·y0^eps·t)^(-1/eps).
    const double y = comparison_ode_at({2.0, 2.0, 0.0}, 10.0, 0.3);
    CHECK(y == doctest::Approx(10.0 * std::pow(1.0 + 2.0 * 2.0 * 100.0 * 0.3, -0.5)).epsilon(1e-14));
}

TEST_CASE("comparison ode: fixed point stays put") {
    const double k1 = 2.0, eps = 1.5, c = 3.0;
    const double ystar = std::pow(c / k1, 1.0 / (1.0 + eps));
    for (double t : {0.5, 1.0, 2.0}) {
        CHECK(comparison_ode_at({k1, eps, c}, ystar, t) == doctest::Approx(ystar).epsilon(1e-8));
    }
}

TEST_CASE("comparison ode vs riccati oracle (epsilon = 1, source on)") {
    // y' = C - k·y^2 has the closed form
    //   y(t) = y∞·(y0 + y∞·tanh(k·y∞·t))/(y∞ + y0·tanh(k·y∞·t)), y∞ = sqrt(C/k).
    const double k = 1.0, C = 1.0, y0 = 5.0;
    const double yinf = std::sqrt(C / k);
    for (double t : {0.1, 0.7, 2.0, 10.0}) {
        const double th = std::tanh(k * yinf * t);
        const double oracle = yinf * (y0 + yinf * th) / (yinf + y0 * th);
        CHECK(comparison_ode_at({k, 1.0, C}, y0, t) == doctest::Approx(oracle).epsilon(1e-7));
    }
}

TEST_CASE("comparison ode agrees with itself under tolerance refinement") {
    const ComparisonOde ode{1.0, 2.0, 1.0};
    const double coarse = comparison_ode_at(ode, 100.0, 1.0, 1e-8);
    const double fine = comparison_ode_at(ode, 100.0, 1.0, 1e-12);
    CHECK(std::abs(coarse - fine) <= 1e-6 * std::max(1.0, std::abs(fine)));
}

TEST_CASE("bound_2_26 direct evaluations") {
    CHECK(bound_2_26(1.0, 1.0, 1.0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(bound_2_26(1.0, 2.0, 1.0) == doctest::Approx(8.0).epsilon(1e-15));
    CHECK_THROWS_AS(bound_2_26(0.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("bound_2_26 dominates the ode at t >= 1 uniformly in y0") {
    for (double eps : {1.0, 2.0}) {
        const double bound = bound_2_26(1.0, eps, 1.0);
        for (double y0 : {0.0, 10.0, 1e3, 1e6}) {
            const double y1 = comparison_ode_at({1.0, eps, 1.0}, y0, 1.0);
            CHECK(y1 <= bound * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("comparison ode rejects bad parameters") {
    CHECK_THROWS_AS(comparison_ode_at({-1.0, 1.0, 0.0}, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(comparison_ode_at({1.0, 0.0, 0.0}, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(comparison_ode_at({1.0, 1.0, -1.0}, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(comparison_ode_at({1.0, 1.0, 0.0}, -1.0, 1.0), std::invalid_argument);
}
