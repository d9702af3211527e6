#ifndef HAWKES_EVENT_LOG_HPP
#define HAWKES_EVENT_LOG_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace hawkes {

struct Event {
    double time;
    std::int32_t node;
};

// Chronological record of one realization. Jump heights are always 1, so
// per-node counting paths are recovered from the event sequence.
struct EventLog {
    std::vector<Event> events;               // strictly increasing times
    std::vector<std::uint32_t> node_count;   // final count per node
    std::uint64_t candidates = 0;            // realized thinning candidates
    std::uint64_t tie_count = 0;             // probability-zero time ties hit

    std::uint64_t total() const { return events.size(); }

    std::vector<double> times_of(int node) const;

    // Per-node counts at each requested time (times must be sorted);
    // result[k][node] counts events with time <= snapshot k.
    std::vector<std::vector<std::uint32_t>> counts_at(const std::vector<double>& times) const;

    // CSV with columns node,time; extra header lines written verbatim first.
    std::string to_csv(const std::vector<std::string>& header_lines = {}) const;
};

}  // namespace hawkes

#endif
