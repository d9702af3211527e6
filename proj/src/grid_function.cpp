#include "hawkes/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hawkes {

GridFunction::GridFunction(double start, double step, std::vector<double> vals)
    : t0(start), dt(step), values(std::move(vals)) {
    if (values.empty()) throw std::invalid_argument("GridFunction: empty grid");
    if (values.size() > 1 && dt <= 0.0) throw std::invalid_argument("GridFunction: step must be positive");
}

double GridFunction::operator()(double t) const {
    if (values.empty()) throw std::logic_error("GridFunction: empty grid");
    if (values.size() == 1 || t <= t0) return values.front();
    double pos = (t - t0) / dt;
    if (pos >= static_cast<double>(values.size() - 1)) return values.back();
    auto i = static_cast<std::size_t>(pos);
    double w = pos - static_cast<double>(i);
    return values[i] * (1.0 - w) + values[i + 1] * w;
}

double GridFunction::integral() const {
    if (values.size() < 2) return 0.0;
    double sum = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
    return sum * dt;
}

GridFunction GridFunction::cumulative_integral() const {
    std::vector<double> acc(values.size(), 0.0);
    for (std::size_t i = 1; i < values.size(); ++i) {
        acc[i] = acc[i - 1] + 0.5 * dt * (values[i - 1] + values[i]);
    }
    GridFunction out;
    out.t0 = t0;
    out.dt = dt;
    out.values = std::move(acc);
    return out;
}

double GridFunction::max_on(double ta, double tb) const {
    if (values.empty()) throw std::logic_error("GridFunction: empty grid");
    if (tb < ta) std::swap(ta, tb);
    double lo = std::floor((ta - t0) / dt);
    double hi = std::ceil((tb - t0) / dt);
    std::size_t i0 = lo <= 0.0 ? 0 : std::min<std::size_t>(static_cast<std::size_t>(lo), values.size() - 1);
    std::size_t i1 = hi <= 0.0 ? 0 : std::min<std::size_t>(static_cast<std::size_t>(hi), values.size() - 1);
    double m = values[i0];
    for (std::size_t i = i0; i <= i1; ++i) m = std::max(m, values[i]);
    return m;
}

double GridFunction::max_value() const {
    return *std::max_element(values.begin(), values.end());
}

std::string GridFunction::to_csv(const std::vector<std::string>& header_lines) const {
    std::string out;
    for (const auto& line : header_lines) {
        out += line;
        out += '\n';
    }
    out += "t,value\n";
    char buf[64];
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", time_at(i), values[i]);
        out += buf;
    }
    return out;
}

}  // namespace hawkes
