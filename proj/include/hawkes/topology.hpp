#ifndef HAWKES_TOPOLOGY_HPP
#define HAWKES_TOPOLOGY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hawkes/kernel.hpp"

namespace hawkes {

enum class Boundary { periodic, absorbing };

struct Edge {
    std::int32_t target;
    double weight;
};

// Finite interaction network. Complete graphs carry weight 1/N on every
// ordered pair (self-loops included); lattice boxes carry 1/(2d+1) on the
// von Neumann neighbourhood plus the self-loop. Baselines mu_i live here.
class Topology {
public:
    static Topology complete(int n);
    static Topology lattice_box(int d, int L, Boundary boundary = Boundary::periodic);
    static Topology custom(int n, std::vector<std::vector<Edge>> out_edges);

    int node_count() const { return n_; }

    // Out-edges of j: the nodes whose intensity an event at j feeds.
    const std::vector<Edge>& out_edges(int j) const { return out_[j]; }

    bool is_complete() const { return kind_ == Kind::complete; }
    bool is_lattice() const { return kind_ == Kind::lattice; }
    int dimension() const { return d_; }
    int side() const { return L_; }
    Boundary boundary() const { return boundary_; }

    // Lattice coordinate helpers. Coordinates are offsets from the box
    // center, so the origin node sits at offset 0.
    int lattice_node(const std::vector<int>& offset) const;
    std::vector<int> lattice_offset(int node) const;
    int origin() const;

    std::vector<double> mu;  // per-node baselines

    std::string describe() const;

private:
    enum class Kind { complete, lattice, custom };
    Kind kind_ = Kind::custom;
    int n_ = 0;
    int d_ = 0;
    int L_ = 0;
    Boundary boundary_ = Boundary::periodic;
    std::vector<std::vector<Edge>> out_;
};

// Baseline generators shared by configs and experiments.
std::vector<double> constant_baseline(int n, double value);
std::vector<double> alternating_baseline(const Topology& topo, double v0, double v1);
std::vector<double> iid_uniform_baseline(int n, double lo, double hi, std::uint64_t seed);

struct AssumptionReport {
    std::vector<double> multiplier;  // per source node j: minimal phibar multiple
    double max_multiplier = 0.0;
    double weighted_baseline_sum = 0.0;  // sum_i h_i(0) p_i
    std::vector<int> offenders;          // nodes exceeding the supplied bound
    bool pass = true;
};

// Checks the summability assumption on a finite graph: for every source j,
// sum over out-edges (j,i) of c_i p_i w_ji phi(s) must stay below
// p_j phibar(s). Edge kernels are proportional to phi, so the check reduces
// to the minimal admissible phibar multiplier per node; nodes whose
// multiplier exceeds `bound` (when finite) are reported as offenders.
AssumptionReport validate_assumption(const Topology& topo, const std::vector<double>& lipschitz,
                                     const std::vector<double>& weights, const Kernel& kernel,
                                     double bound = 0.0);

}  // namespace hawkes

#endif
