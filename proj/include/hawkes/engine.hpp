#ifndef HAWKES_ENGINE_HPP
#define HAWKES_ENGINE_HPP

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hawkes/event_log.hpp"
#include "hawkes/intensity.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/topology.hpp"

namespace hawkes {

// Full description of one process: who excites whom, through which kernel,
// mapped to a rate how, for how long, from which seed.
struct SystemSpec {
    Topology topology;
    Kernel kernel;
    IntensityMap intensity = IntensityMap::linear();
    double horizon = 1.0;
    std::uint64_t seed = 1;
};

struct SimOptions {
    std::uint64_t max_events = 10'000'000;  // explosion guard
    double audit_fraction = 0.0;            // re-verify this share of decisions
    bool impulse_at_origin = false;         // phantom event at t=0, lattice origin
    bool force_generic_path = false;        // history sums instead of decay recursions
};

struct AuditReport {
    std::uint64_t checked = 0;
    std::uint64_t decision_mismatches = 0;
    double max_rate_error = 0.0;
};

// Pathwise distance between the two coupled processes.
struct CoupledDiff {
    std::vector<std::uint32_t> discordant;   // candidates accepted by exactly one side
    std::vector<std::uint32_t> sup_diff;     // sup_t |count_a - count_b| per node
};

struct ExplosionError : std::runtime_error {
    ExplosionError(std::uint64_t cap, double reached)
        : std::runtime_error("event cap " + std::to_string(cap) +
                             " hit at t=" + std::to_string(reached)),
          time_reached(reached) {}
    double time_reached;
};

// Exact thinning simulation. Every candidate for node i is drawn from node i's
// own stream, so results do not depend on scheduling or thread count.
EventLog simulate(const SystemSpec& spec, const SimOptions& opts = {},
                  AuditReport* audit = nullptr);

// Two processes driven by identical candidate streams and acceptance marks;
// each mark is tested against both rates. Node sets and horizons must match.
std::pair<EventLog, EventLog> simulate_coupled(const SystemSpec& spec_a,
                                               const SystemSpec& spec_b,
                                               CoupledDiff* diff = nullptr,
                                               const SimOptions& opts = {});

// Time-rescaling residuals: increments of each node's compensator between its
// own jumps. Exact piecewise-analytic integration; linear rate maps only.
// If the log came from an impulse run, pass the same flag so the phantom
// excitation is replayed.
std::vector<std::vector<double>> residuals(const EventLog& log, const SystemSpec& spec,
                                           bool impulse_at_origin = false);

}  // namespace hawkes

#endif
