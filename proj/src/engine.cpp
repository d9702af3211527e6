#include "hawkes/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hawkes/detail/kernel_ops.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {
namespace {

using detail::KernelOps;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Arrival {
    double time;
    double weight;
};

// One process being simulated: per-node excitation states and the event log.
// Exponential kernels keep the O(1) decay recursion x <- x * exp(-b dt);
// everything else (and the forced generic mode) keeps arrival histories.
struct Side {
    const SystemSpec* spec;
    KernelOps ops;
    int n;
    bool exp_kernel;  // decay recursion state is maintained
    bool exp_fast;    // recursion also serves the acceptance intensity
    bool keep_history;

    std::vector<double> x;   // excitation value at time u (exp_kernel)
    std::vector<double> u;
    std::vector<std::vector<Arrival>> arr;
    std::vector<std::size_t> head;
    std::vector<double> wsum;  // live window weight (rectangular)

    EventLog log;
    double last_event_time = -1.0;

    Side(const SystemSpec& s, const SimOptions& opts)
        : spec(&s), ops(s.kernel), n(s.topology.node_count()) {
        if (n <= 0) throw std::invalid_argument("simulate: empty topology");
        if (!(s.horizon >= 0.0)) throw std::invalid_argument("simulate: bad horizon");
        if (s.topology.mu.size() != static_cast<std::size_t>(n)) {
            throw std::invalid_argument("simulate: baseline vector size mismatch");
        }
        exp_kernel = ops.kind == KernelOps::Kind::exponential;
        exp_fast = exp_kernel && !opts.force_generic_path;
        keep_history = !exp_fast || opts.audit_fraction > 0.0;
        if (exp_kernel) {
            x.assign(n, 0.0);
            u.assign(n, 0.0);
        }
        if (keep_history) {
            arr.resize(n);
            head.assign(n, 0);
            wsum.assign(n, 0.0);
        }
        log.node_count.assign(n, 0);
    }

    // Decay recursion advanced to t; t never decreases between calls for a node.
    double decay_value(int i, double t) {
        if (t > u[i]) {
            x[i] *= std::exp(-ops.b * (t - u[i]));
            u[i] = t;
        }
        return x[i];
    }

    void add_arrival(int i, double t, double w) {
        if (exp_kernel) {
            decay_value(i, t);
            x[i] += w * ops.a;
        }
        if (keep_history) {
            arr[i].push_back({t, w});
            wsum[i] += w;
        }
    }

    // Excitation value at t; t never decreases between calls for a node.
    double eval(int i, double t) {
        if (exp_fast) return decay_value(i, t);
        if (ops.kind == KernelOps::Kind::rectangular) {
            auto& in = arr[i];
            while (head[i] < in.size() && in[head[i]].time <= t - ops.tau) {
                wsum[i] -= in[head[i]].weight;
                ++head[i];
            }
            compact(i);
            return ops.c * wsum[i];
        }
        return history_sum(i, t, false);
    }

    // Upper bound on the excitation over [t, infinity) absent new arrivals.
    // For exponential kernels the recursion supplies it in every mode, so the
    // forced generic path draws the same candidate stream as the fast one and
    // the two differ only through the acceptance intensity.
    double bound(int i, double t) {
        if (exp_kernel) return decay_value(i, t);
        if (ops.kind == KernelOps::Kind::tabulated) return history_sum(i, t, true);
        return eval(i, t);  // rectangular only decays
    }

    double history_sum(int i, double t, bool use_envelope) {
        auto& in = arr[i];
        while (head[i] < in.size() && in[head[i]].time <= t - ops.support_end) {
            wsum[i] -= in[head[i]].weight;
            ++head[i];
        }
        compact(i);
        double s = 0.0;
        for (std::size_t k = head[i]; k < in.size(); ++k) {
            double age = t - in[k].time;
            s += in[k].weight * (use_envelope ? ops.env_value(age) : ops.value(age));
        }
        return s;
    }

    void compact(int i) {
        if (head[i] > 1024 && head[i] * 2 > arr[i].size()) {
            arr[i].erase(arr[i].begin(), arr[i].begin() + static_cast<std::ptrdiff_t>(head[i]));
            head[i] = 0;
        }
    }

    double rate(int i, double excitation) const {
        return (spec->intensity)(spec->topology.mu[i] + excitation);
    }

    // Dominating rate while the excitation stays within [0, excitation_bound].
    double rate_bound(int i, double excitation_bound) const {
        double r = (spec->intensity)(spec->topology.mu[i] + excitation_bound);
        if (!spec->intensity.is_linear()) r += spec->intensity.lipschitz() * excitation_bound;
        return r;
    }

    void record(int i, double t, std::uint64_t cap) {
        if (t == last_event_time) ++log.tie_count;
        last_event_time = t;
        log.events.push_back({t, static_cast<std::int32_t>(i)});
        ++log.node_count[i];
        if (log.events.size() >= cap) throw ExplosionError(cap, t);
    }

    void feed(int i, double t) {
        for (const Edge& e : spec->topology.out_edges(i)) add_arrival(e.target, t, e.weight);
    }
};

// Indexed binary min-heap over per-node candidate times, ties broken by
// node index so the event order is fully deterministic.
class CandidateQueue {
public:
    explicit CandidateQueue(int n)
        : time_(n, kInf), heap_(n), pos_(n) {
        for (int i = 0; i < n; ++i) {
            heap_[i] = i;
            pos_[i] = static_cast<std::size_t>(i);
        }
    }

    void set(int node, double t) {
        time_[node] = t;
        sift(node);
    }

    int top_node() const { return heap_[0]; }
    double top_time() const { return time_[heap_[0]]; }

private:
    std::vector<double> time_;
    std::vector<int> heap_;
    std::vector<std::size_t> pos_;

    bool before(int a, int b) const {
        return time_[a] < time_[b] || (time_[a] == time_[b] && a < b);
    }

    void swap_at(std::size_t i, std::size_t j) {
        std::swap(heap_[i], heap_[j]);
        pos_[heap_[i]] = i;
        pos_[heap_[j]] = j;
    }

    void sift(int node) {
        std::size_t i = pos_[node];
        while (i > 0) {
            std::size_t p = (i - 1) / 2;
            if (!before(heap_[i], heap_[p])) break;
            swap_at(i, p);
            i = p;
        }
        for (;;) {
            std::size_t l = 2 * i + 1, best = i;
            if (l < heap_.size() && before(heap_[l], heap_[best])) best = l;
            if (l + 1 < heap_.size() && before(heap_[l + 1], heap_[best])) best = l + 1;
            if (best == i) break;
            swap_at(i, best);
            i = best;
        }
    }
};

std::vector<RngStream> node_streams(const SystemSpec& spec, int n) {
    std::vector<RngStream> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out.push_back(derive_stream(spec.seed, {0x6e6f6465ULL, static_cast<std::uint64_t>(i)}));
    }
    return out;
}

void apply_impulse(Side& side) {
    const Topology& topo = side.spec->topology;
    int origin = topo.is_lattice() ? topo.origin() : 0;
    for (const Edge& e : topo.out_edges(origin)) side.add_arrival(e.target, 0.0, e.weight);
}

}  // namespace

EventLog simulate(const SystemSpec& spec, const SimOptions& opts, AuditReport* audit) {
    Side side(spec, opts);
    const int n = side.n;
    std::vector<RngStream> rng = node_streams(spec, n);
    RngStream audit_rng = derive_stream(spec.seed, {0x6175646974ULL});
    if (audit) *audit = AuditReport{};

    if (opts.impulse_at_origin) apply_impulse(side);

    CandidateQueue queue(n);
    std::vector<double> dominating(static_cast<std::size_t>(n), 0.0);
    auto redraw = [&](int i, double t) {
        double m = side.rate_bound(i, side.bound(i, t));
        dominating[static_cast<std::size_t>(i)] = m;
        queue.set(i, m > 0.0 ? t + rng[static_cast<std::size_t>(i)].exponential(m) : kInf);
    };
    for (int i = 0; i < n; ++i) redraw(i, 0.0);

    while (queue.top_time() <= spec.horizon) {
        const double t = queue.top_time();
        const int i = queue.top_node();
        const double lam = side.rate(i, side.eval(i, t));
        const double z = rng[static_cast<std::size_t>(i)].uniform() * dominating[static_cast<std::size_t>(i)];
        ++side.log.candidates;

        if (audit && opts.audit_fraction > 0.0 && audit_rng.uniform() < opts.audit_fraction) {
            double slow = side.rate(i, side.history_sum(i, t, false));
            ++audit->checked;
            audit->max_rate_error = std::max(audit->max_rate_error, std::abs(slow - lam));
            if ((z <= slow) != (z <= lam)) ++audit->decision_mismatches;
        }

        if (z <= lam) {
            side.record(i, t, opts.max_events);
            side.feed(i, t);
            bool self_fed = false;
            for (const Edge& e : spec.topology.out_edges(i)) {
                if (e.target == i) self_fed = true;
                redraw(e.target, t);
            }
            if (!self_fed) redraw(i, t);
        } else {
            redraw(i, t);  // decayed state tightens the bound
        }
    }
    return std::move(side.log);
}

std::pair<EventLog, EventLog> simulate_coupled(const SystemSpec& spec_a, const SystemSpec& spec_b,
                                               CoupledDiff* diff, const SimOptions& opts) {
    if (spec_a.topology.node_count() != spec_b.topology.node_count()) {
        throw std::invalid_argument("simulate_coupled: node sets must match");
    }
    if (spec_a.horizon != spec_b.horizon) {
        throw std::invalid_argument("simulate_coupled: horizons must match");
    }
    if (spec_a.seed != spec_b.seed) {
        throw std::invalid_argument("simulate_coupled: coupled runs share one seed");
    }

    Side a(spec_a, opts);
    Side b(spec_b, opts);
    const int n = a.n;
    std::vector<RngStream> rng = node_streams(spec_a, n);

    if (opts.impulse_at_origin) {
        apply_impulse(a);
        apply_impulse(b);
    }
    if (diff) {
        diff->discordant.assign(static_cast<std::size_t>(n), 0);
        diff->sup_diff.assign(static_cast<std::size_t>(n), 0);
    }

    CandidateQueue queue(n);
    std::vector<double> dominating(static_cast<std::size_t>(n), 0.0);
    auto redraw = [&](int i, double t) {
        double m = std::max(a.rate_bound(i, a.bound(i, t)), b.rate_bound(i, b.bound(i, t)));
        dominating[static_cast<std::size_t>(i)] = m;
        queue.set(i, m > 0.0 ? t + rng[static_cast<std::size_t>(i)].exponential(m) : kInf);
    };
    for (int i = 0; i < n; ++i) redraw(i, 0.0);

    std::vector<std::uint8_t> marked(static_cast<std::size_t>(n), 0);
    std::vector<int> touched;

    while (queue.top_time() <= spec_a.horizon) {
        const double t = queue.top_time();
        const int i = queue.top_node();
        const double lam_a = a.rate(i, a.eval(i, t));
        const double lam_b = b.rate(i, b.eval(i, t));
        const double z = rng[static_cast<std::size_t>(i)].uniform() * dominating[static_cast<std::size_t>(i)];
        ++a.log.candidates;
        ++b.log.candidates;

        const bool acc_a = z <= lam_a;
        const bool acc_b = z <= lam_b;
        if (!acc_a && !acc_b) {
            redraw(i, t);
            continue;
        }

        touched.clear();
        auto touch = [&](int k) {
            if (!marked[static_cast<std::size_t>(k)]) {
                marked[static_cast<std::size_t>(k)] = 1;
                touched.push_back(k);
            }
        };
        touch(i);
        if (acc_a) {
            a.record(i, t, opts.max_events);
            a.feed(i, t);
            for (const Edge& e : spec_a.topology.out_edges(i)) touch(e.target);
        }
        if (acc_b) {
            b.record(i, t, opts.max_events);
            b.feed(i, t);
            for (const Edge& e : spec_b.topology.out_edges(i)) touch(e.target);
        }
        if (diff) {
            auto ui = static_cast<std::size_t>(i);
            if (acc_a != acc_b) ++diff->discordant[ui];
            auto gap = static_cast<std::uint32_t>(
                std::abs(static_cast<std::int64_t>(a.log.node_count[ui]) -
                         static_cast<std::int64_t>(b.log.node_count[ui])));
            diff->sup_diff[ui] = std::max(diff->sup_diff[ui], gap);
        }
        for (int k : touched) {
            marked[static_cast<std::size_t>(k)] = 0;
            redraw(k, t);
        }
    }
    return {std::move(a.log), std::move(b.log)};
}

std::vector<std::vector<double>> residuals(const EventLog& log, const SystemSpec& spec,
                                           bool impulse_at_origin) {
    if (!spec.intensity.is_linear()) {
        throw std::invalid_argument("residuals: linear rate maps only");
    }
    const Topology& topo = spec.topology;
    const int n = topo.node_count();
    if (log.node_count.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("residuals: log does not match topology");
    }
    const double mu0 = spec.intensity.mu();
    std::vector<std::vector<double>> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)].reserve(log.node_count[static_cast<std::size_t>(i)]);

    if (spec.kernel.is_exponential()) {
        const double a = spec.kernel.as_exponential().a;
        const double b = spec.kernel.as_exponential().b;
        std::vector<double> x(static_cast<std::size_t>(n), 0.0);
        std::vector<double> u(static_cast<std::size_t>(n), 0.0);
        std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
        std::vector<double> mark(static_cast<std::size_t>(n), 0.0);
        auto advance = [&](int k, double t) {
            auto uk = static_cast<std::size_t>(k);
            double dt = t - u[uk];
            if (dt <= 0.0) return;
            acc[uk] += (mu0 + topo.mu[uk]) * dt - x[uk] * std::expm1(-b * dt) / b;
            x[uk] *= std::exp(-b * dt);
            u[uk] = t;
        };
        if (impulse_at_origin) {
            int origin = topo.is_lattice() ? topo.origin() : 0;
            for (const Edge& e : topo.out_edges(origin)) x[static_cast<std::size_t>(e.target)] += e.weight * a;
        }
        for (const Event& ev : log.events) {
            auto j = static_cast<std::size_t>(ev.node);
            advance(ev.node, ev.time);
            out[j].push_back(acc[j] - mark[j]);
            mark[j] = acc[j];
            for (const Edge& e : topo.out_edges(ev.node)) {
                advance(e.target, ev.time);
                x[static_cast<std::size_t>(e.target)] += e.weight * a;
            }
        }
        return out;
    }

    // Generic kernels: the compensator of node i at t is baseline * t plus
    // sum over received arrivals of weight * mass_integral(t - arrival time).
    std::vector<std::vector<Arrival>> inbox(static_cast<std::size_t>(n));
    std::vector<double> mark(static_cast<std::size_t>(n), 0.0);
    if (impulse_at_origin) {
        int origin = topo.is_lattice() ? topo.origin() : 0;
        for (const Edge& e : topo.out_edges(origin)) inbox[static_cast<std::size_t>(e.target)].push_back({0.0, e.weight});
    }
    for (const Event& ev : log.events) {
        auto j = static_cast<std::size_t>(ev.node);
        double comp = (mu0 + topo.mu[j]) * ev.time;
        for (const Arrival& in : inbox[j]) comp += in.weight * spec.kernel.mass_integral(ev.time - in.time);
        out[j].push_back(comp - mark[j]);
        mark[j] = comp;
        for (const Edge& e : topo.out_edges(ev.node)) {
            inbox[static_cast<std::size_t>(e.target)].push_back({ev.time, e.weight});
        }
    }
    return out;
}

}  // namespace hawkes
