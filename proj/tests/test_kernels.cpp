#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "hawkes/kernel.hpp"

using namespace hawkes;
using doctest::Approx;

namespace {
constexpr double kE = 2.718281828459045235360287;

// Trapezoidal convolution of two grids sharing step dt, evaluated on g's grid.
GridFunction trapz_convolve(const GridFunction& g, const GridFunction& h) {
    std::size_t n = g.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= k; ++j) {
            double w = (j == 0 || j == k) ? 0.5 : 1.0;
            double hv = k - j < h.size() ? h.values[k - j] : 0.0;
            acc += w * g.values[j] * hv;
        }
        out[k] = acc * g.dt;
    }
    return GridFunction(0.0, g.dt, std::move(out));
}
}  // namespace

TEST_CASE("exponential kernel closed forms") {
    Kernel k = Kernel::exponential(2.0, 1.0);
    CHECK(k.value(0.0) == Approx(2.0));
    CHECK(k.value(1.5) == Approx(2.0 * std::exp(-1.5)));
    CHECK(k.value(-1.0) == 0.0);
    CHECK(k.total_mass() == Approx(2.0));
    CHECK(k.mass_integral(1.0) == Approx(2.0 * (1.0 - 1.0 / kE)));
    CHECK(k.laplace(0.0) == Approx(2.0));
    CHECK(k.laplace(1.0) == Approx(1.0));
    CHECK(k.mean_lag_transform(1.0) == Approx(0.5));
    CHECK(k.classify() == Criticality::supercritical);
}

TEST_CASE("rectangular kernel closed forms") {
    Kernel k = Kernel::rectangular(1.0, 0.5);
    CHECK(k.value(0.25) == Approx(1.0));
    CHECK(k.value(0.5) == 0.0);
    CHECK(k.total_mass() == Approx(0.5));
    CHECK(k.mass_integral(0.2) == Approx(0.2));
    CHECK(k.mass_integral(3.0) == Approx(0.5));
    CHECK(k.laplace(2.0) == Approx((1.0 - std::exp(-1.0)) / 2.0));
    CHECK(k.classify() == Criticality::subcritical);
    // zero height is a legal degenerate kernel (pure Poisson systems)
    CHECK(Kernel::rectangular(0.0, 1.0).total_mass() == 0.0);
}

TEST_CASE("classification follows the kernel mass") {
    CHECK(Kernel::exponential(1.0, 2.0).classify() == Criticality::subcritical);
    CHECK(Kernel::exponential(2.0, 2.0).classify() == Criticality::critical);
    CHECK(Kernel::exponential(2.0, 1.0).classify() == Criticality::supercritical);
}

TEST_CASE("branching exponent solves L_phi = 1") {
    Kernel e = Kernel::exponential(2.0, 1.0);
    CHECK(std::abs(e.branching_exponent() - 1.0) < 1e-10);

    Kernel r = Kernel::rectangular(2.0, 1.0);
    double a0 = r.branching_exponent();
    CHECK(a0 == Approx(1.5936242600400401).epsilon(1e-8));
    CHECK(std::abs(r.laplace(a0) - 1.0) < 1e-9);

    CHECK_THROWS_AS(Kernel::exponential(1.0, 2.0).branching_exponent(), std::domain_error);
}

TEST_CASE("rectangular mean lag transform") {
    Kernel r = Kernel::rectangular(2.0, 1.0);
    // int_0^1 2 t e^{-t} dt = 2 (1 - 2/e)
    CHECK(r.mean_lag_transform(1.0) == Approx(2.0 * (1.0 - 2.0 / kE)).epsilon(1e-12));
    CHECK(r.mean_lag_transform(0.0) == Approx(1.0));  // int 2 t dt on [0,1]
}

TEST_CASE("exponential convolution powers are Erlang shaped") {
    CHECK(exp_convolution_power(2.0, 1.0, 1, 1.0) == Approx(2.0 / kE));
    CHECK(exp_convolution_power(2.0, 1.0, 2, 1.0) == Approx(4.0 / kE));  // 4 t e^{-t}
    CHECK(exp_convolution_power(2.0, 1.0, 2, 0.0) == 0.0);

    Kernel k = Kernel::exponential(2.0, 1.0);
    GridFunction p2 = k.convolution_power(2, 2.0, 1e-3);
    CHECK(p2(1.0) == Approx(4.0 / kE).epsilon(1e-9));
}

TEST_CASE("convolution identity phi*2 conv phi = phi*3") {
    Kernel k = Kernel::rectangular(1.0, 1.0);
    double dt = 2e-3;
    GridFunction p1 = k.convolution_power(1, 3.0, dt);
    GridFunction p2 = k.convolution_power(2, 3.0, dt);
    GridFunction p3 = k.convolution_power(3, 3.0, dt);
    CHECK(p2(0.5) == Approx(0.5).epsilon(1e-3));  // triangle ramp
    // the descending side sits past the kernel's jump, where trapezoid
    // quadrature only reaches O(dt) absolutely
    CHECK(std::abs(p2(1.5) - 0.5) < 5e-3);
    GridFunction conv = trapz_convolve(p2, p1);
    double sup = 0.0;
    for (std::size_t i = 0; i < p3.size(); ++i) sup = std::max(sup, std::abs(conv.values[i] - p3.values[i]));
    CHECK(sup < 5e-3);
}

TEST_CASE("laplace transform is multiplicative under convolution") {
    Kernel k = Kernel::exponential(2.0, 1.0);
    GridFunction p2 = k.convolution_power(2, 60.0, 5e-3);
    Kernel tab = Kernel::tabulated(p2);
    // L_{phi*phi}(1) = L_phi(1)^2 = 1
    CHECK(tab.laplace(1.0) == Approx(1.0).epsilon(2e-4));
    CHECK(tab.total_mass() == Approx(4.0).epsilon(1e-4));
}

TEST_CASE("tabulated kernels quadrature their grid") {
    double dt = 1e-2;
    std::vector<double> v;
    for (int i = 0; i <= 3000; ++i) v.push_back(std::exp(-dt * i));
    Kernel tab = Kernel::tabulated(GridFunction(0.0, dt, v));
    CHECK(tab.total_mass() == Approx(1.0).epsilon(1e-4));
    CHECK(tab.value(0.505) == Approx(std::exp(-0.505)).epsilon(1e-4));
    CHECK(tab.value(100.0) == 0.0);
    CHECK(tab.laplace(1.0) == Approx(0.5).epsilon(1e-3));
    CHECK(tab.mass_integral(1.0) == Approx(1.0 - 1.0 / kE).epsilon(1e-4));
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(Kernel::exponential(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Kernel::exponential(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Kernel::rectangular(-0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Kernel::rectangular(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Kernel::tabulated(GridFunction(0.0, 0.1, {})), std::invalid_argument);
    CHECK_THROWS_AS(Kernel::tabulated(GridFunction(0.0, 0.1, {1.0, -0.2})), std::invalid_argument);
    CHECK_THROWS_AS(Kernel::exponential(2.0, 1.0).laplace(-0.5), std::invalid_argument);
    CHECK_THROWS_AS(Kernel::exponential(2.0, 1.0).convolution_power(0, 1.0, 0.1),
                    std::invalid_argument);
    CHECK(!Kernel::exponential(2.0, 1.0).describe().empty());
}
