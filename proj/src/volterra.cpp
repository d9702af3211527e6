#include "hawkes/volterra.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace hawkes {

namespace {

std::size_t step_count(double T, double dt) {
    if (dt <= 0.0 || T < 0.0) throw std::invalid_argument("volterra: need dt > 0, T >= 0");
    auto n = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
    return n;
}

// Solves v_k = f_k + (phi * v)(t_k) with trapezoidal product integration.
// forcing(k) must be independent of v_k. Exponential kernels use the decay
// recursion S_k = e^(-b dt) (S_(k-1) + dt/2 a v_(k-1)) + dt/2 a v_k, which
// equals the trapezoidal convolution sum exactly and costs O(n).
std::vector<double> solve_linear_volterra(const Kernel& kernel, double dt,
                                          const std::vector<double>& forcing) {
    std::size_t n = forcing.size();
    std::vector<double> v(n, 0.0);
    if (n == 0) return v;
    v[0] = forcing[0];

    if (kernel.is_exponential()) {
        double a = kernel.as_exponential().a;
        double b = kernel.as_exponential().b;
        double decay = std::exp(-b * dt);
        double half = 0.5 * dt * a;
        double denom = 1.0 - half;
        if (denom <= 0.0) throw std::invalid_argument("volterra: step too coarse for kernel height");
        double S = 0.0;  // running trapezoidal convolution sum
        for (std::size_t k = 1; k < n; ++k) {
            double carry = decay * (S + half * v[k - 1]);
            v[k] = (forcing[k] + carry) / denom;
            S = carry + half * v[k];
        }
        return v;
    }

    std::vector<double> phi(n);
    for (std::size_t i = 0; i < n; ++i) phi[i] = kernel.value(static_cast<double>(i) * dt);
    double denom = 1.0 - 0.5 * dt * phi[0];
    if (denom <= 0.0) throw std::invalid_argument("volterra: step too coarse for kernel height");
    for (std::size_t k = 1; k < n; ++k) {
        double acc = 0.5 * phi[k] * v[0];
        for (std::size_t j = 1; j < k; ++j) acc += phi[k - j] * v[j];
        v[k] = (forcing[k] + dt * acc) / denom;
    }
    return v;
}

GridFunction solve_nonlinear_rate(const Kernel& kernel, const IntensityMap& h, double T, double dt) {
    std::size_t n = step_count(T, dt) + 1;
    std::vector<double> rate(n, 0.0);
    std::vector<double> phi(n);
    for (std::size_t i = 0; i < n; ++i) phi[i] = kernel.value(static_cast<double>(i) * dt);
    rate[0] = h(0.0);
    double half = 0.5 * dt * phi[0];
    for (std::size_t k = 1; k < n; ++k) {
        double partial = 0.5 * phi[k] * rate[0];
        for (std::size_t j = 1; j < k; ++j) partial += phi[k - j] * rate[j];
        partial *= dt;
        // rate_k = h(partial + half * rate_k): contraction when lip*half < 1.
        double x = rate[k - 1];
        for (int iter = 0; iter < 100; ++iter) {
            double next = h(partial + half * x);
            if (std::abs(next - x) < 1e-14 * (1.0 + std::abs(next))) {
                x = next;
                break;
            }
            x = next;
        }
        rate[k] = x;
    }
    return GridFunction(0.0, dt, std::move(rate));
}

GridFunction solve_rate(const Kernel& kernel, const IntensityMap& h, double T, double dt) {
    if (h.is_linear()) {
        std::size_t n = step_count(T, dt) + 1;
        std::vector<double> forcing(n, h.mu());
        return GridFunction(0.0, dt, solve_linear_volterra(kernel, dt, forcing));
    }
    return solve_nonlinear_rate(kernel, h, T, dt);
}

}  // namespace

MeanSolution solve_mean(const Kernel& kernel, const IntensityMap& h, double T, double dt,
                        bool estimate_error) {
    MeanSolution out;
    out.m_prime = solve_rate(kernel, h, T, dt);
    out.m = out.m_prime.cumulative_integral();
    if (estimate_error && out.m.size() > 2) {
        GridFunction coarse = solve_rate(kernel, h, T, 2.0 * dt).cumulative_integral();
        double diff = 0.0;
        for (std::size_t i = 0; i < coarse.size(); ++i) {
            std::size_t j = 2 * i;
            if (j >= out.m.size()) break;
            diff = std::max(diff, std::abs(coarse.values[i] - out.m.values[j]));
        }
        out.error_estimate = diff / 3.0;
        out.step_too_coarse = out.error_estimate > 1e-3 * std::max(1.0, std::abs(out.m.values.back()));
    }
    return out;
}

RenewalSolution renewal_density(const Kernel& kernel, double T, double dt) {
    std::size_t n = step_count(T, dt) + 1;
    std::vector<double> forcing(n);
    for (std::size_t i = 0; i < n; ++i) forcing[i] = kernel.value(static_cast<double>(i) * dt);
    RenewalSolution out;
    out.gamma = GridFunction(0.0, dt, solve_linear_volterra(kernel, dt, forcing));
    out.upsilon = out.gamma.cumulative_integral();
    return out;
}

GrowthConstants growth_constants(const Kernel& kernel, double mu) {
    if (mu <= 0.0) throw std::invalid_argument("growth_constants: need mu > 0");
    GrowthConstants out;
    out.regime = kernel.classify();
    double mass = kernel.total_mass();
    if (out.regime == Criticality::critical) {
        throw std::domain_error("growth_constants: critical regime unsupported");
    }
    if (out.regime == Criticality::subcritical) {
        out.a0 = mu / (1.0 - mass);
        return out;
    }
    double alpha0 = kernel.branching_exponent();
    double b1 = kernel.mean_lag_transform(alpha0);
    double a0 = mu / (alpha0 * alpha0 * b1);
    out.alpha0 = alpha0;
    out.a0 = a0;

    // sigma2 = alpha0^2 mu^-2 int_0^inf e^(-2 alpha0 s) m'_s ds. The
    // integrand decays like e^(-alpha0 s), so a horizon of 20/alpha0 leaves
    // a tail below e^-20 relative; the tail is added from the asymptote.
    double horizon = 20.0 / alpha0;
    double dt = std::min(1e-3, horizon / 2000.0);
    std::size_t max_steps = 400000;
    if (horizon / dt > static_cast<double>(max_steps)) dt = horizon / static_cast<double>(max_steps);
    MeanSolution ms = solve_mean(kernel, IntensityMap::linear(mu), horizon, dt, false);
    GridFunction integrand = ms.m_prime;
    for (std::size_t i = 0; i < integrand.size(); ++i) {
        integrand.values[i] *= std::exp(-2.0 * alpha0 * integrand.time_at(i));
    }
    double body = integrand.integral();
    double tail = a0 * std::exp(-alpha0 * integrand.end_time());
    out.sigma2 = alpha0 * alpha0 / (mu * mu) * (body + tail);
    out.sigma2_tail = alpha0 * alpha0 / (mu * mu) * tail;
    out.sigma2_horizon = integrand.end_time();
    return out;
}

double default_step(const Kernel& kernel) {
    double mass = kernel.total_mass();
    double scale = mass > 1.0 ? 1.0 / mass : 1.0;
    return 1e-3 * scale;
}

}  // namespace hawkes
