#ifndef HAWKES_MEANFIELD_HPP
#define HAWKES_MEANFIELD_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hawkes/event_log.hpp"
#include "hawkes/intensity.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/stats.hpp"

namespace hawkes {

// Limit of the complete-graph system: an inhomogeneous Poisson process whose
// deterministic intensity is the mean-growth derivative m'. Thinned against
// a piecewise-constant majorant of m'.
EventLog simulate_limit(const Kernel& kernel, const IntensityMap& h, double horizon,
                        std::uint64_t seed);

// Complete graph on n nodes with edge weight 1/n (self-loops included):
// every node sees the same convolved input, so the whole system reduces to
// one scalar process with n times the common intensity and i.i.d. uniform
// node labels. Distribution-exact and O(1) per event in n.
struct ExchangeableResult {
    std::uint64_t total = 0;
    std::vector<std::uint32_t> node_count;
    std::uint64_t candidates = 0;
};

ExchangeableResult simulate_exchangeable(int n, const Kernel& kernel, const IntensityMap& h,
                                         double horizon, std::uint64_t seed,
                                         std::uint64_t max_events = 100'000'000);

struct ChaosReport {
    std::vector<int> n_values;
    std::vector<double> sup_error;     // mean over replicas of sup_t |count - limit count|
    std::vector<double> sup_error_se;
    std::vector<double> tv_error;      // mean discordant-acceptance count (upper bound)
    SlopeFit slope;                    // log sup_error against log n
    int replicas = 0;
    bool enough_replicas = true;  // standard errors below half the inter-n spacing
};

// Couples node 1 of the n-node system with its limit copy through shared
// candidate marks and measures the pathwise count distance.
ChaosReport chaos_error(const Kernel& kernel, const IntensityMap& h, double horizon,
                        const std::vector<int>& n_values, int replicas, std::uint64_t seed);

enum class CltRegime { subcritical, super_small_t, super_large_t };
std::string to_string(CltRegime r);

struct CltSample {
    CltRegime regime = CltRegime::subcritical;
    double m_t = 0.0;
    double scale = 0.0;    // sqrt(m_t) in the Poissonian regimes, sqrt(n) in the shared-limit one
    double sigma2 = 0.0;   // asymptotic variance, supercritical only
    bool regime_mismatch = false;  // m_T/n inside [0.1, 10]: neither limit regime
    int replicas = 0;
    std::vector<std::vector<double>> statistics;  // [replica][component]
};

// Per-replica normalized fluctuation vectors scale * (Z^{n,i}_T / m_T - 1)
// for components i < ell. Linear intensity only.
CltSample clt_sample(const Kernel& kernel, double mu, double horizon, int n, int ell,
                     int replicas, std::uint64_t seed);

}  // namespace hawkes

#endif
