#include "hawkes/kernel.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hawkes {

namespace {
constexpr double kRootTol = 1e-10;       // absolute tolerance on |L_phi - 1|
constexpr double kCriticalBand = 1e-9;   // |Lambda - 1| classification band
}  // namespace

std::string to_string(Criticality c) {
    switch (c) {
        case Criticality::subcritical: return "subcritical";
        case Criticality::critical: return "critical";
        case Criticality::supercritical: return "supercritical";
    }
    return "unknown";
}

Kernel Kernel::exponential(double a, double b) {
    if (a < 0.0 || b <= 0.0) throw std::invalid_argument("exponential kernel: need a >= 0, b > 0");
    return Kernel(Exponential{a, b});
}

Kernel Kernel::rectangular(double c, double tau) {
    if (c < 0.0 || tau <= 0.0) throw std::invalid_argument("rectangular kernel: need c >= 0, tau > 0");
    return Kernel(Rectangular{c, tau});
}

Kernel Kernel::tabulated(GridFunction grid) {
    if (grid.values.empty()) throw std::invalid_argument("tabulated kernel: empty grid");
    for (double v : grid.values) {
        if (v < 0.0 || !std::isfinite(v)) throw std::invalid_argument("tabulated kernel: phi must be finite and >= 0");
    }
    if (grid.t0 != 0.0) throw std::invalid_argument("tabulated kernel: grid must start at t = 0");
    return Kernel(Tabulated{std::move(grid)});
}

double Kernel::value(double t) const {
    if (t < 0.0) return 0.0;
    if (auto* e = std::get_if<Exponential>(&v_)) return e->a * std::exp(-e->b * t);
    if (auto* r = std::get_if<Rectangular>(&v_)) return t < r->tau ? r->c : 0.0;
    const auto& g = std::get<Tabulated>(v_).grid;
    if (t > g.end_time()) return 0.0;
    return g(t);
}

double Kernel::total_mass() const {
    if (auto* e = std::get_if<Exponential>(&v_)) return e->a / e->b;
    if (auto* r = std::get_if<Rectangular>(&v_)) return r->c * r->tau;
    return std::get<Tabulated>(v_).grid.integral();
}

double Kernel::mass_integral(double t) const {
    if (t <= 0.0) return 0.0;
    if (auto* e = std::get_if<Exponential>(&v_)) return e->a / e->b * -std::expm1(-e->b * t);
    if (auto* r = std::get_if<Rectangular>(&v_)) return r->c * std::min(t, r->tau);
    const auto& g = std::get<Tabulated>(v_).grid;
    if (t >= g.end_time()) return g.integral();
    // Trapezoid over whole grid steps plus the partial last step.
    double pos = (t - g.t0) / g.dt;
    auto i = static_cast<std::size_t>(pos);
    double acc = 0.0;
    for (std::size_t k = 0; k < i; ++k) acc += 0.5 * g.dt * (g.values[k] + g.values[k + 1]);
    double frac = pos - static_cast<double>(i);
    if (frac > 0.0 && i + 1 < g.size()) {
        double vt = g.values[i] * (1.0 - frac) + g.values[i + 1] * frac;
        acc += 0.5 * (frac * g.dt) * (g.values[i] + vt);
    }
    return acc;
}

double Kernel::laplace(double alpha) const {
    if (alpha < 0.0) throw std::invalid_argument("laplace: alpha must be >= 0");
    if (auto* e = std::get_if<Exponential>(&v_)) return e->a / (alpha + e->b);
    if (auto* r = std::get_if<Rectangular>(&v_)) {
        if (alpha == 0.0) return r->c * r->tau;
        return r->c * -std::expm1(-alpha * r->tau) / alpha;
    }
    const auto& g = std::get<Tabulated>(v_).grid;
    GridFunction damped = g;
    for (std::size_t i = 0; i < damped.size(); ++i) {
        damped.values[i] *= std::exp(-alpha * damped.time_at(i));
    }
    return damped.integral();
}

double Kernel::mean_lag_transform(double alpha) const {
    if (alpha < 0.0) throw std::invalid_argument("mean_lag_transform: alpha must be >= 0");
    if (auto* e = std::get_if<Exponential>(&v_)) {
        double s = alpha + e->b;
        return e->a / (s * s);
    }
    if (auto* r = std::get_if<Rectangular>(&v_)) {
        if (alpha == 0.0) return 0.5 * r->c * r->tau * r->tau;
        // int_0^tau c t e^(-alpha t) dt
        double at = alpha * r->tau;
        return r->c * (1.0 - std::exp(-at) * (1.0 + at)) / (alpha * alpha);
    }
    const auto& g = std::get<Tabulated>(v_).grid;
    GridFunction damped = g;
    for (std::size_t i = 0; i < damped.size(); ++i) {
        double t = damped.time_at(i);
        damped.values[i] *= t * std::exp(-alpha * t);
    }
    return damped.integral();
}

Criticality Kernel::classify() const {
    double mass = total_mass();
    if (std::abs(mass - 1.0) <= kCriticalBand) return Criticality::critical;
    return mass < 1.0 ? Criticality::subcritical : Criticality::supercritical;
}

double Kernel::branching_exponent() const {
    if (classify() != Criticality::supercritical) {
        throw std::domain_error("branching_exponent: kernel is not supercritical");
    }
    // L_phi is continuous and strictly decreasing with L_phi(0) > 1 and
    // limit 0, so the root is bracketed once L_phi(hi) < 1.
    double hi = 1.0;
    while (laplace(hi) > 1.0) {
        hi *= 2.0;
        if (hi > 1e12) throw std::runtime_error("branching_exponent: bracket search failed");
    }
    double lo = hi > 1.0 ? hi / 2.0 : 0.0;
    if (laplace(lo) < 1.0) lo = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        double mid = 0.5 * (lo + hi);
        double L = laplace(mid);
        if (std::abs(L - 1.0) < kRootTol && hi - lo < 1e-13 * (1.0 + mid)) return mid;
        (L > 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double exp_convolution_power(double a, double b, int n, double t) {
    if (t < 0.0) return 0.0;
    if (n == 1) return a * std::exp(-b * t);
    // a^n t^(n-1) e^(-bt) / (n-1)!, evaluated in log space for stability.
    if (t == 0.0) return 0.0;
    double lg = n * std::log(a) + (n - 1) * std::log(t) - b * t - std::lgamma(static_cast<double>(n));
    return std::exp(lg);
}

GridFunction Kernel::convolution_power(int n, double T, double dt) const {
    if (n < 1) throw std::invalid_argument("convolution_power: n must be >= 1");
    if (dt <= 0.0 || T < 0.0) throw std::invalid_argument("convolution_power: need dt > 0, T >= 0");
    auto steps = static_cast<std::size_t>(std::llround(T / dt));
    std::vector<double> out(steps + 1);

    if (auto* e = std::get_if<Exponential>(&v_)) {
        for (std::size_t i = 0; i <= steps; ++i) {
            out[i] = exp_convolution_power(e->a, e->b, n, static_cast<double>(i) * dt);
        }
        return GridFunction(0.0, dt, std::move(out));
    }

    std::vector<double> phi(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) phi[i] = value(static_cast<double>(i) * dt);
    out = phi;
    std::vector<double> next(steps + 1);
    for (int power = 2; power <= n; ++power) {
        for (std::size_t k = 0; k <= steps; ++k) {
            double acc = 0.0;
            if (k > 0) {
                acc += 0.5 * (phi[0] * out[k] + phi[k] * out[0]);
                for (std::size_t j = 1; j < k; ++j) acc += phi[j] * out[k - j];
            }
            next[k] = acc * dt;
        }
        std::swap(out, next);
    }
    return GridFunction(0.0, dt, std::move(out));
}

std::string Kernel::describe() const {
    char buf[96];
    if (auto* e = std::get_if<Exponential>(&v_)) {
        std::snprintf(buf, sizeof(buf), "exponential(a=%g,b=%g)", e->a, e->b);
        return buf;
    }
    if (auto* r = std::get_if<Rectangular>(&v_)) {
        std::snprintf(buf, sizeof(buf), "rectangular(c=%g,tau=%g)", r->c, r->tau);
        return buf;
    }
    std::snprintf(buf, sizeof(buf), "tabulated(%zu points,dt=%g)", std::get<Tabulated>(v_).grid.size(),
                  std::get<Tabulated>(v_).grid.dt);
    return buf;
}

}  // namespace hawkes
