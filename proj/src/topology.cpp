#include "hawkes/topology.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "hawkes/rng.hpp"

namespace hawkes {

Topology Topology::complete(int n) {
    if (n < 1) throw std::invalid_argument("complete topology: need n >= 1");
    Topology t;
    t.kind_ = Kind::complete;
    t.n_ = n;
    double w = 1.0 / static_cast<double>(n);
    t.out_.resize(n);
    for (int j = 0; j < n; ++j) {
        t.out_[j].reserve(n);
        for (int i = 0; i < n; ++i) t.out_[j].push_back({i, w});
    }
    t.mu.assign(n, 0.0);
    return t;
}

Topology Topology::lattice_box(int d, int L, Boundary boundary) {
    if (d < 1 || d > 3) throw std::invalid_argument("lattice topology: need 1 <= d <= 3");
    if (L < 3) throw std::invalid_argument("lattice topology: need L >= 3");
    Topology t;
    t.kind_ = Kind::lattice;
    t.d_ = d;
    t.L_ = L;
    t.boundary_ = boundary;
    int n = 1;
    for (int k = 0; k < d; ++k) n *= L;
    t.n_ = n;
    t.out_.resize(n);
    double w = 1.0 / static_cast<double>(2 * d + 1);
    std::vector<int> coord(d);
    for (int node = 0; node < n; ++node) {
        int rem = node;
        for (int k = 0; k < d; ++k) {
            coord[k] = rem % L;
            rem /= L;
        }
        auto& edges = t.out_[node];
        edges.push_back({node, w});
        for (int k = 0; k < d; ++k) {
            for (int dir : {-1, +1}) {
                int c = coord[k] + dir;
                if (c < 0 || c >= L) {
                    if (boundary == Boundary::absorbing) continue;
                    c = (c + L) % L;
                }
                int stride = 1;
                for (int m = 0; m < k; ++m) stride *= L;
                int nb = node + (c - coord[k]) * stride;
                edges.push_back({nb, w});
            }
        }
    }
    t.mu.assign(n, 0.0);
    return t;
}

Topology Topology::custom(int n, std::vector<std::vector<Edge>> out_edges) {
    if (n < 1) throw std::invalid_argument("custom topology: need n >= 1");
    if (static_cast<int>(out_edges.size()) != n) throw std::invalid_argument("custom topology: edge list size mismatch");
    for (const auto& edges : out_edges) {
        for (const auto& e : edges) {
            if (e.target < 0 || e.target >= n) throw std::invalid_argument("custom topology: edge target out of range");
            if (e.weight < 0.0) throw std::invalid_argument("custom topology: negative edge weight");
        }
    }
    Topology t;
    t.kind_ = Kind::custom;
    t.n_ = n;
    t.out_ = std::move(out_edges);
    t.mu.assign(n, 0.0);
    return t;
}

int Topology::lattice_node(const std::vector<int>& offset) const {
    if (kind_ != Kind::lattice) throw std::logic_error("lattice_node: not a lattice topology");
    if (static_cast<int>(offset.size()) != d_) throw std::invalid_argument("lattice_node: wrong dimension");
    int center = (L_ - 1) / 2;
    int node = 0;
    int stride = 1;
    for (int k = 0; k < d_; ++k) {
        int c = offset[k] + center;
        if (boundary_ == Boundary::periodic) {
            c = ((c % L_) + L_) % L_;
        } else if (c < 0 || c >= L_) {
            throw std::out_of_range("lattice_node: offset outside box");
        }
        node += c * stride;
        stride *= L_;
    }
    return node;
}

std::vector<int> Topology::lattice_offset(int node) const {
    if (kind_ != Kind::lattice) throw std::logic_error("lattice_offset: not a lattice topology");
    int center = (L_ - 1) / 2;
    std::vector<int> offset(d_);
    int rem = node;
    for (int k = 0; k < d_; ++k) {
        offset[k] = rem % L_ - center;
        rem /= L_;
    }
    return offset;
}

int Topology::origin() const {
    if (kind_ != Kind::lattice) return 0;
    return lattice_node(std::vector<int>(d_, 0));
}

std::string Topology::describe() const {
    char buf[96];
    switch (kind_) {
        case Kind::complete:
            std::snprintf(buf, sizeof(buf), "complete(N=%d)", n_);
            return buf;
        case Kind::lattice:
            std::snprintf(buf, sizeof(buf), "lattice(d=%d,L=%d,%s)", d_, L_,
                          boundary_ == Boundary::periodic ? "periodic" : "absorbing");
            return buf;
        default:
            std::snprintf(buf, sizeof(buf), "custom(n=%d)", n_);
            return buf;
    }
}

std::vector<double> constant_baseline(int n, double value) {
    return std::vector<double>(static_cast<std::size_t>(n), value);
}

std::vector<double> alternating_baseline(const Topology& topo, double v0, double v1) {
    int n = topo.node_count();
    std::vector<double> mu(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        int parity;
        if (topo.is_lattice()) {
            auto off = topo.lattice_offset(i);
            int s = 0;
            for (int c : off) s += c;
            parity = ((s % 2) + 2) % 2;
        } else {
            parity = i % 2;
        }
        mu[i] = parity == 0 ? v0 : v1;
    }
    return mu;
}

std::vector<double> iid_uniform_baseline(int n, double lo, double hi, std::uint64_t seed) {
    RngStream rng = derive_stream(seed, {0x6261736531696eULL});
    std::vector<double> mu(static_cast<std::size_t>(n));
    for (auto& v : mu) v = lo + (hi - lo) * rng.uniform();
    return mu;
}

AssumptionReport validate_assumption(const Topology& topo, const std::vector<double>& lipschitz,
                                     const std::vector<double>& weights, const Kernel& kernel,
                                     double bound) {
    int n = topo.node_count();
    if (static_cast<int>(lipschitz.size()) != n || static_cast<int>(weights.size()) != n) {
        throw std::invalid_argument("validate_assumption: per-node vector size mismatch");
    }
    for (double p : weights) {
        if (p <= 0.0) throw std::invalid_argument("validate_assumption: weights must be positive");
    }
    (void)kernel;  // edge kernels are w*phi, so the check is kernel-free
    AssumptionReport rep;
    rep.multiplier.resize(n);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (const auto& e : topo.out_edges(j)) {
            s += lipschitz[e.target] * weights[e.target] * e.weight;
        }
        rep.multiplier[j] = s / weights[j];
        rep.max_multiplier = std::max(rep.max_multiplier, rep.multiplier[j]);
        if (bound > 0.0 && rep.multiplier[j] > bound) {
            rep.offenders.push_back(j);
            rep.pass = false;
        }
    }
    rep.weighted_baseline_sum = 0.0;
    for (int i = 0; i < n; ++i) rep.weighted_baseline_sum += topo.mu[i] * weights[i];
    return rep;
}

}  // namespace hawkes
