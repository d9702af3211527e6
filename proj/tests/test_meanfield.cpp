#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "hawkes/meanfield.hpp"
#include "hawkes/volterra.hpp"

using namespace hawkes;
using doctest::Approx;

TEST_CASE("limit process matches the deterministic mean count") {
    Kernel phi = Kernel::exponential(2.0, 1.0);
    IntensityMap h = IntensityMap::linear(1.0);
    const double T = 3.0;
    const double m_T = solve_mean(phi, h, T, 1e-3).m.values.back();
    // trapezoid solver: O(dt^2) relative error compounded over e^T growth
    CHECK(m_T == Approx(2.0 * std::exp(T) - T - 2.0).epsilon(1e-4));

    EventLog once = simulate_limit(phi, h, T, 42);
    CHECK(once.node_count.size() == 1);
    CHECK(once.node_count[0] == once.total());
    EventLog again = simulate_limit(phi, h, T, 42);
    CHECK(once.total() == again.total());

    // counts are Poisson(m_T): mean over replicas within 4 standard errors
    const int reps = 200;
    double sum = 0.0;
    for (int r = 0; r < reps; ++r) {
        sum += static_cast<double>(simulate_limit(phi, h, T, 100 + static_cast<std::uint64_t>(r)).total());
    }
    const double se = std::sqrt(m_T / reps);
    CHECK(std::abs(sum / reps - m_T) < 4.0 * se);
}

TEST_CASE("exchangeable sampler reproduces the finite-system mean") {
    Kernel phi = Kernel::exponential(1.0, 2.0);
    IntensityMap h = IntensityMap::linear(1.0);
    const int n = 10;
    const double T = 10.0;
    const double m_T = solve_mean(phi, h, T, 1e-3).m.values.back();

    ExchangeableResult first = simulate_exchangeable(n, phi, h, T, 7);
    std::uint64_t by_node = 0;
    for (auto c : first.node_count) by_node += c;
    CHECK(first.node_count.size() == static_cast<std::size_t>(n));
    CHECK(by_node == first.total);
    CHECK(first.candidates >= first.total);

    ExchangeableResult replay = simulate_exchangeable(n, phi, h, T, 7);
    CHECK(replay.total == first.total);
    CHECK(replay.node_count == first.node_count);

    const int reps = 200;
    std::vector<double> totals;
    for (int r = 0; r < reps; ++r) {
        totals.push_back(static_cast<double>(
            simulate_exchangeable(n, phi, h, T, 500 + static_cast<std::uint64_t>(r)).total));
    }
    const double avg = mean(totals);
    const double se = std::sqrt(sample_variance(totals) / reps);
    CHECK(std::abs(avg - n * m_T) < 4.0 * se + 1e-9);
}

TEST_CASE("pathwise gap to the limit copy shrinks with system size") {
    Kernel phi = Kernel::exponential(1.0, 2.0);
    IntensityMap h = IntensityMap::linear(1.0);
    ChaosReport rep = chaos_error(phi, h, 3.0, {8, 27, 64}, 30, 5);
    REQUIRE(rep.sup_error.size() == 3);
    CHECK(rep.replicas == 30);
    CHECK(rep.sup_error[0] > rep.sup_error[2]);
    CHECK(rep.slope.slope < -0.1);
    for (double tv : rep.tv_error) CHECK(tv >= 0.0);
    for (double se : rep.sup_error_se) CHECK(se > 0.0);

    CHECK_THROWS_AS(chaos_error(phi, h, 3.0, {}, 30, 5), std::invalid_argument);
    CHECK_THROWS_AS(chaos_error(phi, h, 3.0, {8}, 1, 5), std::invalid_argument);
}

TEST_CASE("subcritical fluctuations are standardized") {
    Kernel phi = Kernel::exponential(1.0, 2.0);
    CltSample s = clt_sample(phi, 1.0, 30.0, 50, 2, 300, 11);
    CHECK(s.regime == CltRegime::subcritical);
    CHECK(!s.regime_mismatch);
    CHECK(s.scale == Approx(std::sqrt(s.m_t)));
    REQUIRE(s.statistics.size() == 300);
    REQUIRE(s.statistics[0].size() == 2);

    std::vector<double> z1, z2, pooled;
    for (const auto& row : s.statistics) {
        z1.push_back(row[0]);
        z2.push_back(row[1]);
        pooled.push_back(row[0]);
        pooled.push_back(row[1]);
    }
    CHECK(std::abs(mean(pooled)) < 0.25);
    CHECK(sample_variance(pooled) > 0.6);
    CHECK(sample_variance(pooled) < 1.5);
    CHECK(std::abs(correlation(z1, z2)) < 0.25);
}

TEST_CASE("supercritical regimes split on the count-per-node ratio") {
    Kernel phi = Kernel::exponential(2.0, 1.0);

    CltSample small_t = clt_sample(phi, 1.0, 2.0, 10000, 1, 2, 3);
    CHECK(small_t.regime == CltRegime::super_small_t);
    CHECK(!small_t.regime_mismatch);
    CHECK(small_t.m_t == Approx(2.0 * std::exp(2.0) - 4.0).epsilon(1e-4));
    CHECK(small_t.scale == Approx(std::sqrt(small_t.m_t)));
    CHECK(small_t.sigma2 == Approx(1.5).epsilon(0.01));

    CltSample large_t = clt_sample(phi, 1.0, 8.0, 10, 1, 2, 3);
    CHECK(large_t.regime == CltRegime::super_large_t);
    CHECK(!large_t.regime_mismatch);
    CHECK(large_t.scale == Approx(std::sqrt(10.0)));

    CltSample between = clt_sample(phi, 1.0, 5.0, 30, 1, 2, 3);
    CHECK(between.regime_mismatch);

    CHECK(to_string(CltRegime::super_small_t) != to_string(CltRegime::super_large_t));
    CHECK_THROWS_AS(clt_sample(Kernel::exponential(1.0, 1.0), 1.0, 5.0, 10, 1, 2, 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(clt_sample(phi, 1.0, 5.0, 10, 11, 2, 3), std::invalid_argument);
}
