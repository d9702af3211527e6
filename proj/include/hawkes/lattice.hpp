#ifndef HAWKES_LATTICE_HPP
#define HAWKES_LATTICE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hawkes/grid_function.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/topology.hpp"

namespace hawkes {

// (A v)_i = sum over edges j -> i of w_ji v_j: one application of the box
// transition matrix (self loop plus von Neumann neighbours, weight 1/(2d+1)).
std::vector<double> apply_adjacency(const Topology& topo, const std::vector<double>& v);

// Fixed point of v = mu + Lambda A v on the box: the per-node limit of
// t^{-1} Z^i_t in the subcritical law of large numbers. Requires Lambda < 1.
std::vector<double> box_resolvent(const Topology& topo, double lambda, double tol = 1e-13);

// Per-node mean intensities of the box system: m'_t = mu + (phi * A m')_t
// solved by forward product integration, exponential kernels through the
// same decay recursion as the scalar solver (one implicit stencil fixed
// point per step). m is the running integral of m'.
struct LatticeMeanField {
    std::vector<GridFunction> m_prime;  // one grid per node
    std::vector<GridFunction> m;
};

LatticeMeanField vector_mean(const Topology& topo, const Kernel& kernel, double T, double dt);

// Independent route to the same quantity at one time point: the series
// m'_i(t) = mu_i + sum_n (A^n mu)_i int_0^t phi^(*n), with the convolution
// mass integrals in closed form. Exponential kernels only.
std::vector<double> vector_mean_series(const Topology& topo, const Kernel& kernel, double t,
                                       double tol = 1e-12);

// Nodes far enough from an absorbing boundary to stand in for the infinite
// lattice; all nodes under periodic wrap.
std::vector<int> monitored_nodes(const Topology& topo, double T);

struct LatticeLlnReport {
    std::vector<int> nodes;         // monitored nodes
    std::vector<double> estimate;   // per node
    std::vector<double> target;
    std::vector<double> se;
    double flatness = 0.0;          // supercritical: max |est_i/est_j - 1|
    bool box_too_small = false;     // absorbing boundary leaks > 1% of row mass
    int replicas = 0;

    // CSV columns node,estimate,target,stderr.
    std::string to_csv(const std::vector<std::string>& header_lines = {}) const;
};

// Mean over replicas of t^{-1} Z^i_T against the box resolvent target.
LatticeLlnReport lln_subcritical(const Topology& topo, const Kernel& kernel, double T,
                                 int replicas, std::uint64_t seed);

// Replica-median of e^{-alpha0 T} Z^i_T against a0 computed from the box
// average baseline; the flatness statistic is taken on the median field
// (per-replica ratios are dominated by the sampling noise that the
// in-probability limit averages out).
LatticeLlnReport lln_supercritical(const Topology& topo, const Kernel& kernel, double T,
                                   int replicas, std::uint64_t seed);

// (A^n mu)_0 for each requested n, evaluated exactly on the n-step support.
std::vector<double> mean_convergence(int d,
                                     const std::function<double(const std::vector<int>&)>& baseline,
                                     const std::vector<int>& n_list);

}  // namespace hawkes

#endif
