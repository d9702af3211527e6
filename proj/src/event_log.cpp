#include "hawkes/event_log.hpp"

#include <algorithm>
#include <cstdio>

namespace hawkes {

std::vector<double> EventLog::times_of(int node) const {
    std::vector<double> out;
    for (const Event& e : events) {
        if (e.node == node) out.push_back(e.time);
    }
    return out;
}

std::vector<std::vector<std::uint32_t>> EventLog::counts_at(const std::vector<double>& times) const {
    std::vector<std::vector<std::uint32_t>> out;
    out.reserve(times.size());
    std::vector<std::uint32_t> running(node_count.size(), 0);
    std::size_t next = 0;
    for (double snap : times) {
        while (next < events.size() && events[next].time <= snap) {
            ++running[static_cast<std::size_t>(events[next].node)];
            ++next;
        }
        out.push_back(running);
    }
    return out;
}

std::string EventLog::to_csv(const std::vector<std::string>& header_lines) const {
    std::string out;
    out.reserve(events.size() * 28 + 64);
    for (const std::string& line : header_lines) {
        out += line;
        out += '\n';
    }
    out += "node,time\n";
    char buf[64];
    for (const Event& e : events) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g\n", e.node, e.time);
        out += buf;
    }
    return out;
}

}  // namespace hawkes
