#include "hawkes/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "hawkes/engine.hpp"
#include "hawkes/lattice_matrix.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/stats.hpp"
#include "hawkes/volterra.hpp"

namespace hawkes {
namespace {

std::vector<double> simulate_counts(const Topology& topo, const Kernel& kernel, double T,
                                    std::uint64_t seed) {
    SystemSpec spec{topo, kernel, IntensityMap::linear(), T, seed};
    EventLog log = simulate(spec);
    return std::vector<double>(log.node_count.begin(), log.node_count.end());
}

}  // namespace

std::vector<double> apply_adjacency(const Topology& topo, const std::vector<double>& v) {
    const int n = topo.node_count();
    if (v.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("apply_adjacency: size mismatch");
    }
    std::vector<double> out(v.size(), 0.0);
    for (int j = 0; j < n; ++j) {
        for (const Edge& e : topo.out_edges(j)) {
            out[static_cast<std::size_t>(e.target)] += e.weight * v[static_cast<std::size_t>(j)];
        }
    }
    return out;
}

std::vector<double> box_resolvent(const Topology& topo, double lambda, double tol) {
    if (lambda < 0.0 || lambda >= 1.0) {
        throw std::invalid_argument("box_resolvent: need 0 <= Lambda < 1");
    }
    std::vector<double> v = topo.mu;
    for (int iter = 0; iter < 10000; ++iter) {
        std::vector<double> av = apply_adjacency(topo, v);
        double change = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            double next = topo.mu[i] + lambda * av[i];
            change = std::max(change, std::abs(next - v[i]));
            v[i] = next;
        }
        if (change < tol * (1.0 + std::abs(v[0]))) return v;
    }
    throw std::runtime_error("box_resolvent: no convergence");
}

LatticeMeanField vector_mean(const Topology& topo, const Kernel& kernel, double T, double dt) {
    const int n = topo.node_count();
    if (dt <= 0.0 || T < 0.0) throw std::invalid_argument("vector_mean: need dt > 0, T >= 0");
    const auto steps = static_cast<std::size_t>(std::llround(T / dt));
    const auto un = static_cast<std::size_t>(n);

    // values[k*n + i] = m'_i(t_k)
    std::vector<double> values((steps + 1) * un);
    std::vector<double> v(topo.mu);  // m'(0) = mu
    std::copy(v.begin(), v.end(), values.begin());
    std::vector<double> u = apply_adjacency(topo, v);  // A m' at the newest step

    auto solve_node = [&](std::size_t k, const std::vector<double>& rhs_base, double half) {
        // Implicit trapezoid node: v = rhs_base + half * A v, contraction
        // half * ||A|| = half < 1 for any sane step.
        for (int iter = 0; iter < 50; ++iter) {
            std::vector<double> av = apply_adjacency(topo, v);
            double change = 0.0;
            for (std::size_t i = 0; i < un; ++i) {
                double next = rhs_base[i] + half * av[i];
                change = std::max(change, std::abs(next - v[i]));
                v[i] = next;
            }
            if (change < 1e-14 * (1.0 + std::abs(v[0]))) break;
        }
        u = apply_adjacency(topo, v);
        std::copy(v.begin(), v.end(), values.begin() + static_cast<std::ptrdiff_t>(k * un));
    };

    if (kernel.is_exponential()) {
        const double a = kernel.as_exponential().a;
        const double b = kernel.as_exponential().b;
        const double decay = std::exp(-b * dt);
        const double half = 0.5 * dt * a;
        std::vector<double> s(un, 0.0);  // decayed history sum of A m'
        std::vector<double> rhs(un);
        for (std::size_t k = 1; k <= steps; ++k) {
            for (std::size_t i = 0; i < un; ++i) {
                s[i] = decay * (s[i] + half * u[i]);
                rhs[i] = topo.mu[i] + s[i];
            }
            solve_node(k, rhs, half);
            for (std::size_t i = 0; i < un; ++i) s[i] += half * u[i];
        }
    } else {
        // Generic product integration, O(steps^2) vector convolutions.
        std::vector<double> phi(steps + 1);
        for (std::size_t j = 0; j <= steps; ++j) phi[j] = kernel.value(static_cast<double>(j) * dt);
        std::vector<std::vector<double>> u_hist;
        u_hist.reserve(steps + 1);
        u_hist.push_back(u);
        std::vector<double> rhs(un);
        const double half = 0.5 * dt * phi[0];
        for (std::size_t k = 1; k <= steps; ++k) {
            for (std::size_t i = 0; i < un; ++i) {
                double acc = 0.5 * phi[k] * u_hist[0][i];
                for (std::size_t j = 1; j < k; ++j) acc += phi[k - j] * u_hist[j][i];
                rhs[i] = topo.mu[i] + dt * acc;
            }
            solve_node(k, rhs, half);
            u_hist.push_back(u);
        }
    }

    LatticeMeanField out;
    out.m_prime.reserve(un);
    out.m.reserve(un);
    for (std::size_t i = 0; i < un; ++i) {
        std::vector<double> node(steps + 1);
        for (std::size_t k = 0; k <= steps; ++k) node[k] = values[k * un + i];
        GridFunction g(0.0, dt, std::move(node));
        out.m.push_back(g.cumulative_integral());
        out.m_prime.push_back(std::move(g));
    }
    return out;
}

std::vector<double> vector_mean_series(const Topology& topo, const Kernel& kernel, double t,
                                       double tol) {
    if (!kernel.is_exponential()) {
        throw std::invalid_argument("vector_mean_series: exponential kernels only");
    }
    const double a = kernel.as_exponential().a;
    const double b = kernel.as_exponential().b;
    const auto un = static_cast<std::size_t>(topo.node_count());

    std::vector<double> out = topo.mu;
    std::vector<double> power = topo.mu;  // A^n mu
    double scale = 0.0;
    for (std::size_t i = 0; i < un; ++i) scale = std::max(scale, std::abs(topo.mu[i]));
    const double at = a * t;
    for (int n = 1; n < 10000; ++n) {
        power = apply_adjacency(topo, power);
        const double mass = std::pow(a / b, n) * poisson_tail(b * t, n);  // int_0^t phi^(*n)
        for (std::size_t i = 0; i < un; ++i) out[i] += mass * power[i];
        if (static_cast<double>(n) > at + 10.0 * std::sqrt(at + 1.0) + 20.0 && mass * scale < tol) {
            return out;
        }
    }
    throw std::runtime_error("vector_mean_series: no convergence");
}

std::vector<int> monitored_nodes(const Topology& topo, double T) {
    const int n = topo.node_count();
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    if (!topo.is_lattice() || topo.boundary() == Boundary::periodic) return all;

    const int margin = static_cast<int>(std::ceil(std::sqrt(std::max(0.0, T)))) + 5;
    const int half = (topo.side() - 1) / 2;
    std::vector<int> out;
    for (int i = 0; i < n; ++i) {
        bool interior = true;
        for (int c : topo.lattice_offset(i)) {
            if (half - std::abs(c) < margin) interior = false;
        }
        if (interior) out.push_back(i);
    }
    if (out.empty()) throw std::invalid_argument("monitored_nodes: box smaller than the horizon margin");
    return out;
}

std::string LatticeLlnReport::to_csv(const std::vector<std::string>& header_lines) const {
    std::string out;
    for (const std::string& line : header_lines) {
        out += line;
        out += '\n';
    }
    out += "node,estimate,target,stderr\n";
    char buf[128];
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", nodes[i], estimate[i], target[i],
                      se[i]);
        out += buf;
    }
    return out;
}

LatticeLlnReport lln_subcritical(const Topology& topo, const Kernel& kernel, double T,
                                 int replicas, std::uint64_t seed) {
    const double lambda = kernel.total_mass();
    if (lambda >= 1.0) throw std::invalid_argument("lln_subcritical: kernel mass must be < 1");
    if (replicas < 2 || T <= 0.0) throw std::invalid_argument("lln_subcritical: bad T/replicas");

    LatticeLlnReport report;
    report.replicas = replicas;
    report.nodes = monitored_nodes(topo, T);
    std::vector<double> full_target = box_resolvent(topo, lambda);

    if (topo.is_lattice() && topo.boundary() == Boundary::absorbing) {
        // Leaked row mass shows up as a shortfall of the all-ones resolvent
        // against its conserved value 1/(1-Lambda).
        Topology ones = topo;
        ones.mu = constant_baseline(topo.node_count(), 1.0);
        std::vector<double> row = box_resolvent(ones, lambda);
        for (int node : report.nodes) {
            double deficit = 1.0 - (1.0 - lambda) * row[static_cast<std::size_t>(node)];
            if (deficit > 0.01) report.box_too_small = true;
        }
    }

    const auto un = static_cast<std::size_t>(topo.node_count());
    std::vector<double> sum(un, 0.0), sumsq(un, 0.0);
    for (int r = 0; r < replicas; ++r) {
        std::vector<double> counts = simulate_counts(
            topo, kernel, T, derive_seed(seed, {0x6c6c6eULL, static_cast<std::uint64_t>(r)}));
        for (std::size_t i = 0; i < un; ++i) {
            double v = counts[i] / T;
            sum[i] += v;
            sumsq[i] += v * v;
        }
    }
    for (int node : report.nodes) {
        auto i = static_cast<std::size_t>(node);
        double m = sum[i] / replicas;
        double var = std::max(0.0, (sumsq[i] - replicas * m * m) / (replicas - 1));
        report.estimate.push_back(m);
        report.target.push_back(full_target[i]);
        report.se.push_back(std::sqrt(var / replicas));
    }
    return report;
}

LatticeLlnReport lln_supercritical(const Topology& topo, const Kernel& kernel, double T,
                                   int replicas, std::uint64_t seed) {
    if (kernel.classify() != Criticality::supercritical) {
        throw std::invalid_argument("lln_supercritical: kernel mass must be > 1");
    }
    if (replicas < 2 || T <= 0.0) throw std::invalid_argument("lln_supercritical: bad T/replicas");

    double mu_avg = mean(topo.mu);
    GrowthConstants gc = growth_constants(kernel, mu_avg);
    const double alpha0 = *gc.alpha0;
    const double damp = std::exp(-alpha0 * T);

    LatticeLlnReport report;
    report.replicas = replicas;
    report.nodes = monitored_nodes(topo, T);

    const auto un = static_cast<std::size_t>(topo.node_count());
    std::vector<std::vector<double>> scaled(un, std::vector<double>(static_cast<std::size_t>(replicas)));
    for (int r = 0; r < replicas; ++r) {
        std::vector<double> counts = simulate_counts(
            topo, kernel, T, derive_seed(seed, {0x736c6c6eULL, static_cast<std::uint64_t>(r)}));
        for (std::size_t i = 0; i < un; ++i) scaled[i][static_cast<std::size_t>(r)] = damp * counts[i];
    }
    double lo = 0.0, hi = 0.0;
    for (int node : report.nodes) {
        auto i = static_cast<std::size_t>(node);
        double med = median(scaled[i]);
        double sd = std::sqrt(sample_variance(scaled[i]));
        report.estimate.push_back(med);
        report.target.push_back(gc.a0);
        // large-sample standard error of a median under near-normal spread
        report.se.push_back(1.2533 * sd / std::sqrt(static_cast<double>(replicas)));
        if (report.estimate.size() == 1) {
            lo = hi = med;
        } else {
            lo = std::min(lo, med);
            hi = std::max(hi, med);
        }
    }
    report.flatness = lo > 0.0 ? hi / lo - 1.0 : std::numeric_limits<double>::infinity();
    return report;
}

std::vector<double> mean_convergence(int d,
                                     const std::function<double(const std::vector<int>&)>& baseline,
                                     const std::vector<int>& n_list) {
    if (!baseline) throw std::invalid_argument("mean_convergence: missing baseline");
    std::vector<double> out;
    out.reserve(n_list.size());
    for (int n : n_list) {
        LatticeMatrix an = a_power(d, n);
        const int side = an.side();
        std::vector<int> offset(static_cast<std::size_t>(d));
        double acc = 0.0;
        for (std::size_t flat = 0; flat < an.values.size(); ++flat) {
            auto rem = flat;
            for (int c = 0; c < d; ++c) {
                offset[static_cast<std::size_t>(c)] =
                    static_cast<int>(rem % static_cast<std::size_t>(side)) - an.radius;
                rem /= static_cast<std::size_t>(side);
            }
            acc += an.values[flat] * baseline(offset);
        }
        out.push_back(acc);
    }
    return out;
}

}  // namespace hawkes
