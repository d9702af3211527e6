#include "hawkes/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hawkes/detail/kernel_ops.hpp"
#include "hawkes/engine.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/volterra.hpp"

namespace hawkes {
namespace {

using detail::KernelOps;
using detail::ScalarExcitation;

constexpr double kInf = std::numeric_limits<double>::infinity();

GridFunction mean_intensity_grid(const Kernel& kernel, const IntensityMap& h, double T) {
    return solve_mean(kernel, h, T, default_step(kernel), false).m_prime;
}

// suffix[k] = max of values[k..end]; a step lookup at floor((t-t0)/dt) then
// bounds the function on [t, T] from above (interpolated values never exceed
// the surrounding grid values).
std::vector<double> suffix_max(const GridFunction& g) {
    std::vector<double> out(g.values.size());
    double run = 0.0;
    for (std::size_t i = g.values.size(); i-- > 0;) {
        run = std::max(run, g.values[i]);
        out[i] = run;
    }
    return out;
}

double suffix_at(const GridFunction& g, const std::vector<double>& suffix, double t) {
    double pos = (t - g.t0) / g.dt;
    if (pos <= 0.0) return suffix.front();
    auto idx = static_cast<std::size_t>(pos);
    return suffix[std::min(idx, suffix.size() - 1)];
}

struct ChaosOutcome {
    std::uint32_t sup_gap = 0;
    std::uint32_t discordant = 0;
    std::uint32_t count_n = 0;
    std::uint32_t count_limit = 0;
};

// One replica of the shared-marks coupling between node 1 of the n-node
// complete-graph system and its limit copy. The other n-1 nodes are
// superposed into one aggregate stream (they all share node 1's intensity);
// node 1 keeps its own candidate stream so the limit copy can reuse its
// marks. Every candidate of node 1 is tested both against mu + X/n and
// against the deterministic limit intensity.
ChaosOutcome chaos_replica(int n, const KernelOps& ops, const IntensityMap& h, double horizon,
                           const GridFunction& m_prime, const std::vector<double>& suffix,
                           std::uint64_t seed) {
    ScalarExcitation x(ops);
    RngStream rng(seed);
    ChaosOutcome out;

    double bound_node = 0.0, bound_rest = 0.0;
    double t_node = 0.0, t_rest = 0.0;
    auto redraw_node = [&](double t) {
        bound_node = std::max(h.bound_on(x.bound(t) / n), suffix_at(m_prime, suffix, t));
        t_node = t + rng.exponential(bound_node);
    };
    auto redraw_rest = [&](double t) {
        bound_rest = (n - 1) * h.bound_on(x.bound(t) / n);
        t_rest = bound_rest > 0.0 ? t + rng.exponential(bound_rest) : kInf;
    };
    redraw_node(0.0);
    redraw_rest(0.0);

    while (std::min(t_node, t_rest) <= horizon) {
        if (t_node <= t_rest) {
            const double t = t_node;
            const double lam = h(x.eval(t) / n);
            const double lam_limit = m_prime(t);
            const double z = rng.uniform() * bound_node;
            const bool acc = z <= lam;
            const bool acc_limit = z <= lam_limit;
            if (acc) {
                ++out.count_n;
                x.add(t, 1.0);
            }
            if (acc_limit) ++out.count_limit;
            if (acc != acc_limit) ++out.discordant;
            auto gap = static_cast<std::uint32_t>(
                std::abs(static_cast<std::int64_t>(out.count_n) -
                         static_cast<std::int64_t>(out.count_limit)));
            out.sup_gap = std::max(out.sup_gap, gap);
            redraw_node(t);
            if (acc) redraw_rest(t);  // excitation grew: the old bound is stale
        } else {
            const double t = t_rest;
            const double lam_rest = (n - 1) * h(x.eval(t) / n);
            const double z = rng.uniform() * bound_rest;
            if (z <= lam_rest) {
                x.add(t, 1.0);
                redraw_node(t);
            }
            redraw_rest(t);
        }
    }
    return out;
}

}  // namespace

std::string to_string(CltRegime r) {
    switch (r) {
        case CltRegime::subcritical: return "subcritical";
        case CltRegime::super_small_t: return "super-small-t";
        case CltRegime::super_large_t: return "super-large-t";
    }
    return "unknown";
}

EventLog simulate_limit(const Kernel& kernel, const IntensityMap& h, double horizon,
                        std::uint64_t seed) {
    if (!(horizon >= 0.0)) throw std::invalid_argument("simulate_limit: bad horizon");
    GridFunction m_prime = mean_intensity_grid(kernel, h, horizon);
    const double majorant = *std::max_element(m_prime.values.begin(), m_prime.values.end());

    EventLog log;
    log.node_count.assign(1, 0);
    RngStream rng(derive_seed(seed, {0x6c696d6974ULL}));
    double t = 0.0;
    while (majorant > 0.0) {
        t += rng.exponential(majorant);
        if (t > horizon) break;
        ++log.candidates;
        if (rng.uniform() * majorant <= m_prime(t)) {
            log.events.push_back({t, 0});
            ++log.node_count[0];
        }
    }
    return log;
}

ExchangeableResult simulate_exchangeable(int n, const Kernel& kernel, const IntensityMap& h,
                                         double horizon, std::uint64_t seed,
                                         std::uint64_t max_events) {
    if (n <= 0) throw std::invalid_argument("simulate_exchangeable: need n >= 1");
    if (!(horizon >= 0.0)) throw std::invalid_argument("simulate_exchangeable: bad horizon");
    KernelOps ops(kernel);
    ScalarExcitation x(ops);
    RngStream rng(derive_seed(seed, {0x65786368ULL}));

    ExchangeableResult out;
    out.node_count.assign(static_cast<std::size_t>(n), 0);
    double t = 0.0;
    for (;;) {
        const double bound = n * h.bound_on(x.bound(t) / n);
        if (bound <= 0.0) break;  // excitation only decays: no event can ever fire
        t += rng.exponential(bound);
        if (t > horizon) break;
        ++out.candidates;
        const double lam = n * h(x.eval(t) / n);
        if (rng.uniform() * bound <= lam) {
            ++out.total;
            if (out.total >= max_events) throw ExplosionError(max_events, t);
            auto label = static_cast<std::size_t>(rng.next_u64() % static_cast<std::uint64_t>(n));
            ++out.node_count[label];
            x.add(t, 1.0);
        }
    }
    return out;
}

ChaosReport chaos_error(const Kernel& kernel, const IntensityMap& h, double horizon,
                        const std::vector<int>& n_values, int replicas, std::uint64_t seed) {
    if (n_values.empty() || replicas < 2) {
        throw std::invalid_argument("chaos_error: need n values and >= 2 replicas");
    }
    KernelOps ops(kernel);
    GridFunction m_prime = mean_intensity_grid(kernel, h, horizon);
    std::vector<double> suffix = suffix_max(m_prime);

    ChaosReport report;
    report.n_values = n_values;
    report.replicas = replicas;
    for (int n : n_values) {
        std::vector<double> sup(static_cast<std::size_t>(replicas));
        double tv_sum = 0.0;
        for (int r = 0; r < replicas; ++r) {
            auto outcome = chaos_replica(
                n, ops, h, horizon, m_prime, suffix,
                derive_seed(seed, {0x6368616f73ULL, static_cast<std::uint64_t>(n),
                                   static_cast<std::uint64_t>(r)}));
            sup[static_cast<std::size_t>(r)] = outcome.sup_gap;
            tv_sum += outcome.discordant;
        }
        report.sup_error.push_back(mean(sup));
        report.sup_error_se.push_back(
            std::sqrt(sample_variance(sup) / static_cast<double>(replicas)));
        report.tv_error.push_back(tv_sum / static_cast<double>(replicas));
    }

    std::vector<double> n_as_double(n_values.begin(), n_values.end());
    report.slope = loglog_slope(n_as_double, report.sup_error, report.sup_error_se);

    for (std::size_t k = 0; k + 1 < report.sup_error.size(); ++k) {
        double spacing = std::abs(std::log(report.sup_error[k + 1]) - std::log(report.sup_error[k]));
        double rel_se = report.sup_error_se[k] / report.sup_error[k];
        double rel_se_next = report.sup_error_se[k + 1] / report.sup_error[k + 1];
        if (std::max(rel_se, rel_se_next) > 0.5 * spacing) report.enough_replicas = false;
    }
    return report;
}

CltSample clt_sample(const Kernel& kernel, double mu, double horizon, int n, int ell,
                     int replicas, std::uint64_t seed) {
    if (n <= 0 || ell <= 0 || ell > n || replicas <= 1) {
        throw std::invalid_argument("clt_sample: bad n/ell/replicas");
    }
    const Criticality regime = kernel.classify();
    if (regime == Criticality::critical) {
        throw std::invalid_argument("clt_sample: critical kernels have no limit regime");
    }
    const IntensityMap h = IntensityMap::linear(mu);

    CltSample out;
    out.replicas = replicas;
    MeanSolution mean_sol = solve_mean(kernel, h, horizon, default_step(kernel), false);
    out.m_t = mean_sol.m.values.back();

    if (regime == Criticality::subcritical) {
        out.regime = CltRegime::subcritical;
        out.scale = std::sqrt(out.m_t);
    } else {
        double ratio = out.m_t / static_cast<double>(n);
        out.regime_mismatch = ratio >= 0.1 && ratio <= 10.0;
        out.regime = ratio >= 1.0 ? CltRegime::super_large_t : CltRegime::super_small_t;
        out.scale = out.regime == CltRegime::super_large_t ? std::sqrt(static_cast<double>(n))
                                                           : std::sqrt(out.m_t);
        out.sigma2 = growth_constants(kernel, mu).sigma2.value_or(0.0);
    }

    out.statistics.resize(static_cast<std::size_t>(replicas));
    for (int r = 0; r < replicas; ++r) {
        auto res = simulate_exchangeable(
            n, kernel, h, horizon,
            derive_seed(seed, {0x636c74ULL, static_cast<std::uint64_t>(r)}));
        auto& row = out.statistics[static_cast<std::size_t>(r)];
        row.resize(static_cast<std::size_t>(ell));
        for (int i = 0; i < ell; ++i) {
            row[static_cast<std::size_t>(i)] =
                out.scale * (res.node_count[static_cast<std::size_t>(i)] / out.m_t - 1.0);
        }
    }
    return out;
}

}  // namespace hawkes
