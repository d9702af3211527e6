#ifndef HAWKES_GRID_FUNCTION_HPP
#define HAWKES_GRID_FUNCTION_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace hawkes {

// A real function tabulated on a uniform grid t0, t0+dt, ..., with linear
// interpolation between nodes. Used for m, m', Gamma, Upsilon and tabulated
// excitation kernels.
struct GridFunction {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(double start, double step, std::vector<double> vals);

    std::size_t size() const { return values.size(); }
    double time_at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
    double end_time() const { return time_at(values.empty() ? 0 : values.size() - 1); }

    // Linear interpolation; clamps outside [t0, end_time].
    double operator()(double t) const;

    // Trapezoidal integral over the full grid.
    double integral() const;

    // Running trapezoidal integral on the same grid; starts at 0.
    GridFunction cumulative_integral() const;

    // Largest value attained on grid nodes covering [ta, tb] (for piecewise
    // linear functions the max over an interval is attained at a node).
    double max_on(double ta, double tb) const;

    double max_value() const;

    // Two-column serialization, header "t,value". Extra header_lines are
    // written first, verbatim.
    std::string to_csv(const std::vector<std::string>& header_lines = {}) const;
};

}  // namespace hawkes

#endif
