#ifndef HAWKES_VOLTERRA_HPP
#define HAWKES_VOLTERRA_HPP

#include <optional>

#include "hawkes/grid_function.hpp"
#include "hawkes/intensity.hpp"
#include "hawkes/kernel.hpp"

namespace hawkes {

struct MeanSolution {
    GridFunction m;        // mean count, non-decreasing, m(0) = 0
    GridFunction m_prime;  // mean intensity
    // Richardson estimate |m_dt - m_2dt|/3 at the final time (second-order
    // scheme), and the warning flag it drives.
    double error_estimate = 0.0;
    bool step_too_coarse = false;
};

// Solves m_t = int_0^t h((phi * m')(s)) ds by forward product integration
// with trapezoidal weights (lower-triangular Volterra solve). In linear mode
// both m_t = mu t + (phi * m)_t and m'_t = mu + (phi * m')_t are solved
// directly; exponential kernels use an O(n) decay recursion that reproduces
// the generic trapezoidal sums exactly. Nonlinear mode resolves the implicit
// node value by fixed-point iteration (contraction factor dt*phi(0)*lip/2).
MeanSolution solve_mean(const Kernel& kernel, const IntensityMap& h, double T, double dt,
                        bool estimate_error = true);

struct RenewalSolution {
    GridFunction gamma;    // renewal density, solves Gamma = phi + phi * Gamma
    GridFunction upsilon;  // running integral of Gamma
};

RenewalSolution renewal_density(const Kernel& kernel, double T, double dt);

struct GrowthConstants {
    Criticality regime = Criticality::subcritical;
    double a0 = 0.0;
    std::optional<double> alpha0;  // supercritical only
    std::optional<double> sigma2;  // supercritical only
    double sigma2_tail = 0.0;      // analytic tail added beyond the horizon
    double sigma2_horizon = 0.0;   // quadrature horizon used for sigma2
};

// Subcritical: a0 = mu/(1 - Lambda). Supercritical: alpha0 from the root of
// L_phi = 1, a0 = mu/(alpha0^2 * int t phi e^(-alpha0 t) dt), and sigma2 =
// alpha0^2 mu^-2 int_0^inf e^(-2 alpha0 s) m'_s ds with m' integrated on a
// finite horizon and extrapolated by its exponential asymptote
// a0*alpha0*e^(alpha0 s) beyond it (tail reported in sigma2_tail).
GrowthConstants growth_constants(const Kernel& kernel, double mu);

// Spec default: 1e-3 * min(1, 1/Lambda).
double default_step(const Kernel& kernel);

}  // namespace hawkes

#endif
