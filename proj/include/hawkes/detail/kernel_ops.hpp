#ifndef HAWKES_DETAIL_KERNEL_OPS_HPP
#define HAWKES_DETAIL_KERNEL_OPS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hawkes/kernel.hpp"

namespace hawkes::detail {

// Kernel evaluation specialized for simulation hot loops, plus a
// non-increasing majorant for tabulated shapes (their raw values may rise
// again, which would break the dominating-rate argument between redraws).
struct KernelOps {
    enum class Kind { exponential, rectangular, tabulated };
    Kind kind;
    double a = 0.0, b = 0.0;
    double c = 0.0, tau = 0.0;
    const GridFunction* grid = nullptr;
    std::vector<double> envelope;
    double support_end = std::numeric_limits<double>::infinity();

    explicit KernelOps(const Kernel& k) {
        if (k.is_exponential()) {
            kind = Kind::exponential;
            a = k.as_exponential().a;
            b = k.as_exponential().b;
        } else if (k.is_rectangular()) {
            kind = Kind::rectangular;
            c = k.as_rectangular().c;
            tau = k.as_rectangular().tau;
            support_end = tau;
        } else {
            kind = Kind::tabulated;
            grid = &k.as_tabulated().grid;
            support_end = grid->end_time();
            envelope.resize(grid->values.size());
            double run = 0.0;
            for (std::size_t i = grid->values.size(); i-- > 0;) {
                run = std::max(run, grid->values[i]);
                envelope[i] = run;
            }
        }
    }

    double value(double u) const {
        switch (kind) {
            case Kind::exponential:
                return a * std::exp(-b * u);
            case Kind::rectangular:
                return u < tau ? c : 0.0;
            default:
                return u < support_end ? (*grid)(u) : 0.0;
        }
    }

    // sup of value over [u, infinity); equals value itself except for
    // tabulated kernels, where the running right-max over the grid is used.
    double env_value(double u) const {
        if (kind != Kind::tabulated) return value(u);
        if (u >= support_end) return 0.0;
        double pos = (u - grid->t0) / grid->dt;
        auto ceil_idx = static_cast<std::size_t>(std::ceil(std::max(0.0, pos)));
        double tail = ceil_idx < envelope.size() ? envelope[ceil_idx] : 0.0;
        return std::max(value(u), tail);
    }
};

// Running excitation sum_k w_k phi(t - T_k) for one stream of arrivals.
// Exponential kernels use the O(1) decay recursion; rectangular kernels keep
// a sliding window; tabulated ones keep the live history. Evaluation times
// must be non-decreasing.
struct ScalarExcitation {
    const KernelOps* ops;
    double x = 0.0;  // value at time u (exponential only)
    double u = 0.0;
    struct Arrival {
        double time;
        double weight;
    };
    std::vector<Arrival> arr;
    std::size_t head = 0;
    double wsum = 0.0;

    explicit ScalarExcitation(const KernelOps& o) : ops(&o) {}

    void add(double t, double w) {
        if (ops->kind == KernelOps::Kind::exponential) {
            eval(t);
            x += w * ops->a;
            return;
        }
        arr.push_back({t, w});
        wsum += w;
    }

    double eval(double t) {
        switch (ops->kind) {
            case KernelOps::Kind::exponential:
                if (t > u) {
                    x *= std::exp(-ops->b * (t - u));
                    u = t;
                }
                return x;
            case KernelOps::Kind::rectangular:
                drop_dead(t);
                return ops->c * wsum;
            default:
                return history_sum(t, false);
        }
    }

    // Upper bound over [t, infinity) absent new arrivals.
    double bound(double t) {
        if (ops->kind == KernelOps::Kind::tabulated) return history_sum(t, true);
        return eval(t);  // exponential and rectangular only decay
    }

    double history_sum(double t, bool use_envelope) {
        drop_dead(t);
        double s = 0.0;
        for (std::size_t k = head; k < arr.size(); ++k) {
            double age = t - arr[k].time;
            s += arr[k].weight * (use_envelope ? ops->env_value(age) : ops->value(age));
        }
        return s;
    }

    void drop_dead(double t) {
        while (head < arr.size() && arr[head].time <= t - ops->support_end) {
            wsum -= arr[head].weight;
            ++head;
        }
        if (head > 1024 && head * 2 > arr.size()) {
            arr.erase(arr.begin(), arr.begin() + static_cast<std::ptrdiff_t>(head));
            head = 0;
        }
    }
};

}  // namespace hawkes::detail

#endif
