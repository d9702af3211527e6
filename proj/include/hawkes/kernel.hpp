#ifndef HAWKES_KERNEL_HPP
#define HAWKES_KERNEL_HPP

#include <string>
#include <variant>

#include "hawkes/grid_function.hpp"

namespace hawkes {

enum class Criticality { subcritical, critical, supercritical };

std::string to_string(Criticality c);

// Excitation function phi >= 0. Parametric variants carry closed forms for
// the mass, Laplace transform and convolution powers; tabulated kernels fall
// back to trapezoidal quadrature on their grid (zero beyond the grid).
class Kernel {
public:
    struct Exponential {
        double a;  // amplitude: phi(t) = a*exp(-b*t)
        double b;  // decay rate
    };
    struct Rectangular {
        double c;    // height: phi(t) = c on [0, tau), 0 after
        double tau;  // width
    };
    struct Tabulated {
        GridFunction grid;
    };

    static Kernel exponential(double a, double b);
    static Kernel rectangular(double c, double tau);
    static Kernel tabulated(GridFunction grid);

    double value(double t) const;

    // Lambda = integral of phi over [0, infinity).
    double total_mass() const;

    // Integral of phi over [0, t]; exact for parametric variants.
    double mass_integral(double t) const;

    // L_phi(alpha) = int_0^inf exp(-alpha t) phi(t) dt. Requires alpha >= 0
    // (the mass is finite for every supported variant, so alpha = 0 is the
    // mass itself); analytic for parametric variants.
    double laplace(double alpha) const;

    // int_0^inf t phi(t) exp(-alpha t) dt, the mean-lag transform entering
    // the supercritical growth constant. Analytic for parametric variants.
    double mean_lag_transform(double alpha) const;

    Criticality classify() const;

    // Unique positive root alpha0 of L_phi(alpha0) = 1 (supercritical only).
    // L_phi is strictly decreasing, so bisection with a doubling upper
    // bracket terminates; |L_phi(alpha0) - 1| < 1e-10.
    double branching_exponent() const;

    // Tabulates phi^(*n) on [0, T]. Exponential kernels use the closed form
    // a^n t^(n-1) e^(-bt) / (n-1)!; other variants iterate a trapezoidal
    // discrete convolution.
    GridFunction convolution_power(int n, double T, double dt) const;

    bool is_exponential() const { return std::holds_alternative<Exponential>(v_); }
    bool is_rectangular() const { return std::holds_alternative<Rectangular>(v_); }
    bool is_tabulated() const { return std::holds_alternative<Tabulated>(v_); }
    const Exponential& as_exponential() const { return std::get<Exponential>(v_); }
    const Rectangular& as_rectangular() const { return std::get<Rectangular>(v_); }
    const Tabulated& as_tabulated() const { return std::get<Tabulated>(v_); }

    std::string describe() const;

private:
    std::variant<Exponential, Rectangular, Tabulated> v_;
    explicit Kernel(std::variant<Exponential, Rectangular, Tabulated> v) : v_(std::move(v)) {}
};

// Closed-form exponential convolution power a^n t^(n-1) e^(-bt) / (n-1)!.
double exp_convolution_power(double a, double b, int n, double t);

}  // namespace hawkes

#endif
