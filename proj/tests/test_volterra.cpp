#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "hawkes/volterra.hpp"

using namespace hawkes;
using doctest::Approx;

namespace {
constexpr double kE = 2.718281828459045235360287;
}

TEST_CASE("supercritical mean growth hits the closed form") {
    // m(t) = 2 e^t - t - 2 for amplitude 2, decay 1, unit baseline
    MeanSolution sol = solve_mean(Kernel::exponential(2.0, 1.0), IntensityMap::linear(1.0), 1.0,
                                  1e-3);
    double target = 2.0 * kE - 3.0;
    CHECK(std::abs(sol.m.values.back() - target) / target < 1e-4);
    CHECK(sol.m_prime.values.back() == Approx(2.0 * kE - 1.0).epsilon(1e-4));
    CHECK(sol.m.values.front() == 0.0);
    CHECK(sol.m_prime.values.front() == Approx(1.0));
    CHECK(!sol.step_too_coarse);

    bool monotone = true;
    for (std::size_t i = 1; i < sol.m.size(); ++i) {
        monotone = monotone && sol.m.values[i] >= sol.m.values[i - 1];
    }
    CHECK(monotone);
}

TEST_CASE("subcritical mean intensity settles at mu/(1-mass)") {
    MeanSolution sol = solve_mean(Kernel::exponential(1.0, 2.0), IntensityMap::linear(1.0), 50.0,
                                  1e-3);
    CHECK(std::abs(sol.m_prime.values.back() - 2.0) / 2.0 < 5e-3);

    // same limit through the rectangular generic path
    MeanSolution rect = solve_mean(Kernel::rectangular(1.0, 0.5), IntensityMap::linear(1.0), 20.0,
                                   5e-3);
    CHECK(rect.m_prime.values.back() == Approx(2.0).epsilon(1e-2));
}

TEST_CASE("growth constants, both regimes") {
    GrowthConstants sub = growth_constants(Kernel::exponential(1.0, 2.0), 1.0);
    CHECK(sub.regime == Criticality::subcritical);
    CHECK(sub.a0 == Approx(2.0).epsilon(1e-12));
    CHECK(!sub.alpha0.has_value());

    GrowthConstants sup = growth_constants(Kernel::exponential(2.0, 1.0), 1.0);
    CHECK(sup.regime == Criticality::supercritical);
    REQUIRE(sup.alpha0.has_value());
    REQUIRE(sup.sigma2.has_value());
    CHECK(std::abs(*sup.alpha0 - 1.0) < 1e-10);
    CHECK(std::abs(sup.a0 - 2.0) < 1e-6);
    CHECK(std::abs(*sup.sigma2 - 1.5) < 1e-3);
    CHECK(sup.sigma2_tail > 0.0);
    CHECK(sup.sigma2_horizon > 0.0);

    CHECK_THROWS_AS(growth_constants(Kernel::exponential(2.0, 2.0), 1.0), std::domain_error);
    CHECK_THROWS_AS(growth_constants(Kernel::exponential(1.0, 2.0), 0.0), std::invalid_argument);
}

TEST_CASE("renewal density solves Gamma = phi + phi conv Gamma") {
    RenewalSolution sol = renewal_density(Kernel::exponential(2.0, 1.0), 1.0, 1e-3);
    // Gamma(t) = 2 e^t, Upsilon(t) = 2 (e^t - 1)
    CHECK(sol.gamma.values.front() == Approx(2.0));
    CHECK(sol.gamma(1.0) == Approx(2.0 * kE).epsilon(1e-3));
    CHECK(sol.upsilon(1.0) == Approx(2.0 * (kE - 1.0)).epsilon(1e-3));
    CHECK(sol.upsilon.values.front() == 0.0);
}

TEST_CASE("nonlinear mode with an affine map reproduces the linear solver") {
    auto h = IntensityMap::nonlinear([](double x) { return 1.0 + x; }, 1.0, 1.0);
    MeanSolution nl = solve_mean(Kernel::exponential(2.0, 1.0), h, 1.0, 1e-3);
    MeanSolution li = solve_mean(Kernel::exponential(2.0, 1.0), IntensityMap::linear(1.0), 1.0,
                                 1e-3);
    double sup = 0.0;
    for (std::size_t i = 0; i < nl.m.size(); ++i) {
        sup = std::max(sup, std::abs(nl.m.values[i] - li.m.values[i]));
    }
    CHECK(sup < 1e-9);
}

TEST_CASE("saturating nonlinear map keeps the intensity below its ceiling") {
    auto h = IntensityMap::nonlinear([](double x) { return 1.0 + x / (1.0 + x); }, 1.0, 1.0);
    MeanSolution sol = solve_mean(Kernel::exponential(2.0, 1.0), h, 5.0, 1e-3);
    double peak = 0.0;
    for (double v : sol.m_prime.values) peak = std::max(peak, v);
    CHECK(peak <= 2.0 + 1e-9);
    CHECK(sol.m.values.back() > 0.0);
}

TEST_CASE("default step shortens for heavy kernels") {
    CHECK(default_step(Kernel::exponential(2.0, 1.0)) == Approx(5e-4));
    CHECK(default_step(Kernel::exponential(1.0, 2.0)) == Approx(1e-3));
}

TEST_CASE("solver argument validation") {
    CHECK_THROWS_AS(solve_mean(Kernel::exponential(1.0, 2.0), IntensityMap::linear(1.0), 1.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_mean(Kernel::exponential(1.0, 2.0), IntensityMap::linear(1.0), -1.0,
                               1e-3),
                    std::invalid_argument);
}
