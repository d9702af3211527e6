#ifndef HAWKES_INTENSITY_HPP
#define HAWKES_INTENSITY_HPP

#include <functional>
#include <stdexcept>
#include <utility>

namespace hawkes {

// The map h turning the convolved input x = sum of weighted past jumps into
// a jump intensity h(x). Linear mode is h(x) = mu + x (per-node baselines
// supplied by the topology in network contexts, the scalar mu here in the
// scalar ones). Nonlinear mode carries the Lipschitz data needed both for
// well-posedness and for dominating-rate construction: h(x) <= h0 + c x.
class IntensityMap {
public:
    static IntensityMap linear(double mu = 0.0) {
        if (mu < 0.0) throw std::invalid_argument("IntensityMap: baseline must be >= 0");
        IntensityMap m;
        m.linear_ = true;
        m.mu_ = mu;
        m.lipschitz_ = 1.0;
        m.value_at_0_ = mu;
        return m;
    }

    static IntensityMap nonlinear(std::function<double(double)> h, double lipschitz, double value_at_0) {
        if (!h) throw std::invalid_argument("IntensityMap: missing map");
        if (lipschitz < 0.0 || value_at_0 < 0.0) {
            throw std::invalid_argument("IntensityMap: need lipschitz >= 0 and h(0) >= 0");
        }
        IntensityMap m;
        m.linear_ = false;
        m.h_ = std::move(h);
        m.lipschitz_ = lipschitz;
        m.value_at_0_ = value_at_0;
        return m;
    }

    bool is_linear() const { return linear_; }
    double mu() const { return mu_; }
    double lipschitz() const { return lipschitz_; }
    double value_at_0() const { return value_at_0_; }

    double operator()(double x) const { return linear_ ? mu_ + x : h_(x); }

    // Valid upper bound for h over [0, x] (kernel inputs are nonnegative and
    // decay between events, so the reachable set shrinks toward 0).
    double bound_on(double x) const {
        if (linear_) return mu_ + x;
        return h_(x) + lipschitz_ * x;
    }

private:
    bool linear_ = true;
    double mu_ = 0.0;
    std::function<double(double)> h_;
    double lipschitz_ = 1.0;
    double value_at_0_ = 0.0;
};

}  // namespace hawkes

#endif
