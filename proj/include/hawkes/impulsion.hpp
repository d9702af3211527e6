#ifndef HAWKES_IMPULSION_HPP
#define HAWKES_IMPULSION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hawkes/engine.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/topology.hpp"

namespace hawkes {

// Probability that the zero-baseline cascade started by one phantom event
// dies out: the unique root q = 1 - gamma of gamma*Lambda + log(1-gamma) = 0
// in (0,1) when Lambda > 1, and 1 when Lambda <= 1.
double extinction_probability(double lambda);

struct ExtinctionEstimate {
    double lambda = 0.0;
    double closed_form = 1.0;
    double empirical = 1.0;
    double se = 0.0;
    double cap_fraction = 0.0;  // runs stopped by the generation cap
    int replicas = 0;
    std::string to_csv() const;  // lambda,closed_form,empirical,stderr,cap_fraction
};

// Monte Carlo extinction frequency through the embedded branching process:
// generation sizes follow z' ~ Poisson(z * Lambda), one draw per generation.
// Supercritical runs stop as survived once the population reaches
// `survival_threshold`; runs still alive at `generation_cap` count as
// survived and are tallied in cap_fraction.
ExtinctionEstimate extinction_empirical(double lambda, int replicas, std::uint64_t seed,
                                        int generation_cap = 1000,
                                        std::uint64_t survival_threshold = 2000);

// Cascade seeded by a single phantom event at t = 0 at the center of a
// zero-baseline lattice box. The phantom feeds the origin's out-neighbours
// but is not itself recorded.
struct ImpulsionSpec {
    int d = 1;
    int L = 81;
    Boundary boundary = Boundary::periodic;
    Kernel kernel = Kernel::exponential(2.0, 1.0);
    double horizon = 10.0;
    std::uint64_t seed = 1;
};

EventLog simulate_impulsion(const ImpulsionSpec& spec, const SimOptions& opts = {});

// The superposed count of an impulse run on a periodic box is itself a
// one-node cascade with unit self-weight: simulate it directly.
EventLog branching_total(const Kernel& kernel, double horizon, std::uint64_t seed,
                         std::uint64_t max_events = 10'000'000);

// Time-rescaling residuals of the superposed process: compensator increments
// of sum_i Z^i between consecutive events, for logs produced with a phantom
// impulse at t = 0 and zero baselines on a periodic box (so the superposed
// intensity is exactly sum over past events of phi(t - s)).
std::vector<double> total_residuals(const EventLog& log, const Kernel& kernel);

// Space-time renewal density Gamma(x, t) = sum_n A^n(0, x) phi^(*n)(t) on the
// infinite lattice, and its running time integral. Exponential kernels only
// (the convolution powers and their mass integrals are closed-form).
double spatial_renewal(int d, const Kernel& kernel, const std::vector<int>& offset, double t);
double spatial_renewal_mass(int d, const Kernel& kernel, const std::vector<int>& offset,
                            double t);

struct ProfileReport {
    std::vector<double> t_values;
    std::vector<double> x_values;
    // ratio_median[k][j]: surviving-replica median of the rescaled count at
    // the node nearest x_j * sqrt(t_k), normalized by the replica's own limit
    // variable and the diffusive profile; 1 in the large-time limit.
    std::vector<std::vector<double>> ratio_median;
    std::vector<std::vector<double>> ratio_iqr;
    int survivors = 0;
    int replicas = 0;
    double extinct_fraction = 0.0;
    double extinct_closed_form = 0.0;
    double h_mean = 0.0;  // normalized limit variable, all replicas
    double h_se = 0.0;    // its Monte Carlo standard error
    double h_sensitivity = 0.0;  // relative shift when read at horizon/2
    std::vector<double> h_values;  // per replica, extinct runs near 0
    std::string to_csv() const;  // t,x,ratio_median,ratio_iqr,survivors
};

// Monte Carlo check of the supercritical diffusive shape limit on a d = 1 box:
// e^(-alpha0 t) sqrt(t) Z^(x sqrt t)_t / (H p_a(x)) -> 1 on survival, where
// H is estimated from the replica's own superposed count at the horizon and
// p_a is the diffusive profile with clock rate a = phi(0). Survival is
// declared when the normalized limit variable exceeds 0.01/alpha0.
ProfileReport profile(const ImpulsionSpec& spec, const std::vector<double>& t_list,
                      const std::vector<double>& x_list, int replicas);

}  // namespace hawkes

#endif
