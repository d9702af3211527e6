#include "hawkes/impulsion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "hawkes/lattice_matrix.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/stats.hpp"

namespace hawkes {
namespace {

void append_row(std::string& out, const char* fmt, double a, double b, double c, double d,
                double e) {
    char buf[176];
    std::snprintf(buf, sizeof buf, fmt, a, b, c, d, e);
    out += buf;
}

}  // namespace

double extinction_probability(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("extinction_probability: lambda must be finite and >= 0");
    }
    if (lambda <= 1.0) return 1.0;
    // f(g) = g*lambda + log(1-g) has f > 0 at g = 1-1/lambda and f < 0 at
    // g = 1-exp(-lambda), so the survival mass g sits strictly between them.
    double lo = 1.0 - 1.0 / lambda;
    double hi = 1.0 - std::exp(-lambda);
    double g = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double f = g * lambda + std::log1p(-g);
        if (f > 0.0) {
            lo = g;
        } else {
            hi = g;
        }
        double fp = lambda - 1.0 / (1.0 - g);
        double next = g - f / fp;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // Newton left the bracket
        if (std::abs(next - g) < 1e-16) {
            g = next;
            break;
        }
        g = next;
    }
    return 1.0 - g;
}

std::string ExtinctionEstimate::to_csv() const {
    std::string out = "lambda,closed_form,empirical,stderr,cap_fraction\n";
    append_row(out, "%.17g,%.17g,%.17g,%.17g,%.17g\n", lambda, closed_form, empirical, se,
               cap_fraction);
    return out;
}

ExtinctionEstimate extinction_empirical(double lambda, int replicas, std::uint64_t seed,
                                        int generation_cap, std::uint64_t survival_threshold) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("extinction_empirical: lambda must be finite and >= 0");
    }
    if (replicas < 1) throw std::invalid_argument("extinction_empirical: need replicas >= 1");
    ExtinctionEstimate est;
    est.lambda = lambda;
    est.closed_form = extinction_probability(lambda);
    est.replicas = replicas;
    int extinct = 0;
    int capped = 0;
    for (int r = 0; r < replicas; ++r) {
        RngStream stream = derive_stream(seed, {0x657874, static_cast<std::uint64_t>(r)});
        std::uint64_t z = 1;
        bool died = false;
        for (int g = 0; g < generation_cap; ++g) {
            z = stream.poisson(static_cast<double>(z) * lambda);
            if (z == 0) {
                died = true;
                break;
            }
            // Above the threshold a supercritical cascade dies with
            // probability < q^threshold, far below the Monte Carlo noise.
            if (lambda > 1.0 && z >= survival_threshold) break;
        }
        if (died) {
            ++extinct;
        } else if (lambda <= 1.0 || z < survival_threshold) {
            ++capped;
        }
    }
    est.empirical = static_cast<double>(extinct) / static_cast<double>(replicas);
    est.se = std::sqrt(est.empirical * (1.0 - est.empirical) / static_cast<double>(replicas));
    est.cap_fraction = static_cast<double>(capped) / static_cast<double>(replicas);
    return est;
}

EventLog simulate_impulsion(const ImpulsionSpec& spec, const SimOptions& opts) {
    Topology topo = Topology::lattice_box(spec.d, spec.L, spec.boundary);
    topo.mu = constant_baseline(topo.node_count(), 0.0);
    SystemSpec sys{std::move(topo), spec.kernel, IntensityMap::linear(), spec.horizon, spec.seed};
    SimOptions run = opts;
    run.impulse_at_origin = true;
    return simulate(sys, run);
}

EventLog branching_total(const Kernel& kernel, double horizon, std::uint64_t seed,
                         std::uint64_t max_events) {
    Topology topo = Topology::custom(1, {{Edge{0, 1.0}}});
    topo.mu = {0.0};
    SystemSpec sys{std::move(topo), kernel, IntensityMap::linear(), horizon, seed};
    SimOptions run;
    run.impulse_at_origin = true;
    run.max_events = max_events;
    return simulate(sys, run);
}

std::vector<double> total_residuals(const EventLog& log, const Kernel& kernel) {
    std::vector<double> res;
    res.reserve(log.events.size());
    if (kernel.is_exponential()) {
        auto [a, b] = kernel.as_exponential();
        double x = a;  // phantom excitation at t = 0
        double prev = 0.0;
        for (const Event& ev : log.events) {
            double delta = ev.time - prev;
            double decay = std::exp(-b * delta);
            res.push_back(x * (1.0 - decay) / b);
            x = x * decay + a;
            prev = ev.time;
        }
        return res;
    }
    double support = std::numeric_limits<double>::infinity();
    if (kernel.is_rectangular()) support = kernel.as_rectangular().tau;
    if (kernel.is_tabulated()) support = kernel.as_tabulated().grid.end_time();
    std::vector<double> times{0.0};  // phantom first
    times.reserve(log.events.size() + 1);
    std::size_t head = 0;
    double prev = 0.0;
    for (const Event& ev : log.events) {
        while (head < times.size() && prev - times[head] >= support) ++head;
        double acc = 0.0;
        for (std::size_t k = head; k < times.size(); ++k) {
            acc += kernel.mass_integral(ev.time - times[k]) - kernel.mass_integral(prev - times[k]);
        }
        res.push_back(acc);
        times.push_back(ev.time);
        prev = ev.time;
    }
    return res;
}

namespace {

// Convolution-power truncation: past n ~ a*t the time factors decay like a
// Poisson(a*t) tail, so a generous sigma margin bounds the remainder below
// double precision for every t used here.
int power_truncation(double a, double t) {
    double at = a * t;
    return static_cast<int>(at + 10.0 * std::sqrt(at + 1.0) + 20.0);
}

double spatial_sum(int d, const Kernel& kernel, const std::vector<int>& offset, double t,
                   bool mass) {
    if (!kernel.is_exponential()) {
        throw std::invalid_argument("spatial renewal: exponential kernels only");
    }
    if (static_cast<int>(offset.size()) != d) {
        throw std::invalid_argument("spatial renewal: offset/dimension mismatch");
    }
    if (t <= 0.0) return 0.0;
    auto [a, b] = kernel.as_exponential();
    int n_max = power_truncation(a, t);
    double ratio = a / b;
    double mass_factor = 1.0;
    double total = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        mass_factor *= ratio;
        double spatial = a_power(d, n).at(offset);
        if (spatial == 0.0) continue;
        double time_factor = mass ? mass_factor * poisson_tail(b * t, n)
                                  : exp_convolution_power(a, b, n, t);
        total += spatial * time_factor;
    }
    return total;
}

}  // namespace

double spatial_renewal(int d, const Kernel& kernel, const std::vector<int>& offset, double t) {
    return spatial_sum(d, kernel, offset, t, false);
}

double spatial_renewal_mass(int d, const Kernel& kernel, const std::vector<int>& offset,
                            double t) {
    return spatial_sum(d, kernel, offset, t, true);
}

std::string ProfileReport::to_csv() const {
    std::string out = "t,x,ratio_median,ratio_iqr,survivors\n";
    for (std::size_t k = 0; k < t_values.size(); ++k) {
        for (std::size_t j = 0; j < x_values.size(); ++j) {
            append_row(out, "%.17g,%.17g,%.17g,%.17g,%.17g\n", t_values[k], x_values[j],
                       ratio_median[k][j], ratio_iqr[k][j], static_cast<double>(survivors));
        }
    }
    return out;
}

ProfileReport profile(const ImpulsionSpec& spec, const std::vector<double>& t_list,
                      const std::vector<double>& x_list, int replicas) {
    if (spec.d != 1) throw std::invalid_argument("profile: one-dimensional boxes only");
    if (!spec.kernel.is_exponential() || spec.kernel.classify() != Criticality::supercritical) {
        throw std::invalid_argument("profile: needs a supercritical exponential kernel");
    }
    if (t_list.empty() || x_list.empty()) throw std::invalid_argument("profile: empty grid");
    if (!std::is_sorted(t_list.begin(), t_list.end()) || t_list.front() <= 0.0) {
        throw std::invalid_argument("profile: t values must be positive and increasing");
    }
    if (t_list.back() > spec.horizon) throw std::invalid_argument("profile: t beyond horizon");
    if (replicas < 2) throw std::invalid_argument("profile: need replicas >= 2");

    double alpha0 = spec.kernel.branching_exponent();
    double b1 = spec.kernel.mean_lag_transform(alpha0);
    double a_clock = spec.kernel.as_exponential().a;
    double survival_floor = 0.01 / alpha0;

    Topology topo = Topology::lattice_box(spec.d, spec.L, spec.boundary);
    topo.mu = constant_baseline(topo.node_count(), 0.0);

    // Node nearest x sqrt(t) for every (t, x) pair, plus the diffusive density
    // evaluated at the continuum point.
    std::size_t nt = t_list.size(), nx = x_list.size();
    std::vector<std::vector<int>> node(nt, std::vector<int>(nx));
    std::vector<double> density(nx);
    int radius = (spec.L - 1) / 2;
    for (std::size_t j = 0; j < nx; ++j) {
        density[j] = gaussian_kernel(spec.d, a_clock, {x_list[j]});
        for (std::size_t k = 0; k < nt; ++k) {
            int off = static_cast<int>(std::round(x_list[j] * std::sqrt(t_list[k])));
            if (std::abs(off) > radius) throw std::invalid_argument("profile: x sqrt(t) outside box");
            node[k][j] = topo.lattice_node({off});
        }
    }

    double half_time = spec.horizon / 2.0;
    std::vector<std::vector<std::vector<double>>> ratios(
        nt, std::vector<std::vector<double>>(nx));
    std::vector<double> h_all, h_half_all;
    h_all.reserve(static_cast<std::size_t>(replicas));
    h_half_all.reserve(static_cast<std::size_t>(replicas));
    int survivors = 0;

    for (int r = 0; r < replicas; ++r) {
        SystemSpec sys{topo, spec.kernel, IntensityMap::linear(), spec.horizon,
                       derive_seed(spec.seed, {0x70726f66, static_cast<std::uint64_t>(r)})};
        SimOptions run;
        run.impulse_at_origin = true;
        EventLog log = simulate(sys, run);

        double h_raw = std::exp(-alpha0 * spec.horizon) * static_cast<double>(log.total());
        auto half_count = std::upper_bound(
            log.events.begin(), log.events.end(), half_time,
            [](double t, const Event& e) { return t < e.time; });
        h_all.push_back(b1 * h_raw);
        h_half_all.push_back(b1 * std::exp(-alpha0 * half_time) *
                             static_cast<double>(half_count - log.events.begin()));
        if (b1 * h_raw <= survival_floor) continue;
        ++survivors;

        auto counts = log.counts_at(t_list);
        for (std::size_t k = 0; k < nt; ++k) {
            double damp = std::sqrt(t_list[k]) * std::exp(-alpha0 * t_list[k]);
            for (std::size_t j = 0; j < nx; ++j) {
                double z = static_cast<double>(counts[k][static_cast<std::size_t>(node[k][j])]);
                ratios[k][j].push_back(damp * z / (h_raw * density[j]));
            }
        }
    }
    if (survivors == 0) throw std::runtime_error("profile: no run survived to the horizon");

    ProfileReport rep;
    rep.t_values = t_list;
    rep.x_values = x_list;
    rep.ratio_median.assign(nt, std::vector<double>(nx, 0.0));
    rep.ratio_iqr.assign(nt, std::vector<double>(nx, 0.0));
    for (std::size_t k = 0; k < nt; ++k) {
        for (std::size_t j = 0; j < nx; ++j) {
            rep.ratio_median[k][j] = median(ratios[k][j]);
            rep.ratio_iqr[k][j] = quantile(ratios[k][j], 0.75) - quantile(ratios[k][j], 0.25);
        }
    }
    rep.survivors = survivors;
    rep.replicas = replicas;
    rep.extinct_fraction =
        1.0 - static_cast<double>(survivors) / static_cast<double>(replicas);
    rep.extinct_closed_form = extinction_probability(spec.kernel.total_mass());
    rep.h_mean = mean(h_all);
    rep.h_se = std::sqrt(sample_variance(h_all) / static_cast<double>(replicas));
    double h_half_mean = mean(h_half_all);
    rep.h_sensitivity = std::abs(h_half_mean - rep.h_mean) / std::max(rep.h_mean, 1e-300);
    rep.h_values = std::move(h_all);
    return rep;
}

}  // namespace hawkes
