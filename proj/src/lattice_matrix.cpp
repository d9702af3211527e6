#include "hawkes/lattice_matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace hawkes {

namespace {

std::size_t box_size(int d, int radius) {
    std::size_t s = 1;
    for (int k = 0; k < d; ++k) s *= static_cast<std::size_t>(2 * radius + 1);
    return s;
}

// Convolve in place with the (2d+1)-point stencil, zero beyond the box.
void stencil_apply(int d, int radius, const std::vector<double>& in, std::vector<double>& out) {
    int side = 2 * radius + 1;
    double w = 1.0 / static_cast<double>(2 * d + 1);
    std::size_t n = in.size();
    std::vector<std::size_t> stride(d);
    stride[0] = 1;
    for (int k = 1; k < d; ++k) stride[k] = stride[k - 1] * static_cast<std::size_t>(side);
    for (std::size_t idx = 0; idx < n; ++idx) {
        double acc = in[idx];
        for (int k = 0; k < d; ++k) {
            auto c = static_cast<int>((idx / stride[k]) % static_cast<std::size_t>(side));
            if (c > 0) acc += in[idx - stride[k]];
            if (c < side - 1) acc += in[idx + stride[k]];
        }
        out[idx] = acc * w;
    }
}

}  // namespace

std::size_t LatticeMatrix::index(const std::vector<int>& offset) const {
    int s = side();
    std::size_t idx = 0;
    std::size_t stride = 1;
    for (int k = 0; k < d; ++k) {
        idx += static_cast<std::size_t>(offset[k] + radius) * stride;
        stride *= static_cast<std::size_t>(s);
    }
    return idx;
}

double LatticeMatrix::at(const std::vector<int>& offset) const {
    for (int k = 0; k < d; ++k) {
        if (offset[k] < -radius || offset[k] > radius) return 0.0;
    }
    return values[index(offset)];
}

double LatticeMatrix::at(int i) const {
    if (d != 1) throw std::logic_error("LatticeMatrix::at(int): d != 1");
    return at(std::vector<int>{i});
}

double LatticeMatrix::row_sum() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
}

double LatticeMatrix::second_moment() const {
    int s = side();
    double acc = 0.0;
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
        std::size_t rem = idx;
        double norm2 = 0.0;
        for (int k = 0; k < d; ++k) {
            auto c = static_cast<int>(rem % static_cast<std::size_t>(s)) - radius;
            norm2 += static_cast<double>(c) * c;
            rem /= static_cast<std::size_t>(s);
        }
        acc += norm2 * values[idx];
    }
    return acc;
}

double LatticeMatrix::sum_of_squares() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return s;
}

LatticeMatrix a_power(int d, int n) {
    if (d < 1 || n < 0) throw std::invalid_argument("a_power: need d >= 1, n >= 0");
    LatticeMatrix m;
    m.d = d;
    m.radius = n;
    m.values.assign(box_size(d, n), 0.0);
    std::vector<int> zero(d, 0);
    m.values[m.index(zero)] = 1.0;
    std::vector<double> tmp(m.values.size());
    for (int step = 0; step < n; ++step) {
        stencil_apply(d, n, m.values, tmp);
        std::swap(m.values, tmp);
    }
    return m;
}

LatticeMatrix q_lambda(int d, double lambda, double tol) {
    if (lambda < 0.0 || lambda >= 1.0) throw std::invalid_argument("q_lambda: need 0 <= Lambda < 1");
    if (tol <= 0.0) throw std::invalid_argument("q_lambda: need tol > 0");
    int n_max = 0;
    if (lambda > 0.0) {
        double tail = 1.0 / (1.0 - lambda);
        while (tail >= tol) {
            ++n_max;
            tail *= lambda;
            if (n_max > 100000) throw std::runtime_error("q_lambda: truncation did not converge");
        }
    }
    LatticeMatrix q;
    q.d = d;
    q.radius = n_max;
    q.values.assign(box_size(d, n_max), 0.0);
    std::vector<double> power(q.values.size(), 0.0);
    std::vector<int> zero(d, 0);
    power[q.index(zero)] = 1.0;
    std::vector<double> tmp(power.size());
    double coef = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        for (std::size_t i = 0; i < power.size(); ++i) q.values[i] += coef * power[i];
        if (n == n_max) break;
        stencil_apply(d, n_max, power, tmp);
        std::swap(power, tmp);
        coef *= lambda;
    }
    return q;
}

double gaussian_kernel(int d, double t, const std::vector<double>& x) {
    if (t <= 0.0) throw std::invalid_argument("gaussian_kernel: need t > 0");
    if (static_cast<int>(x.size()) != d) throw std::invalid_argument("gaussian_kernel: dimension mismatch");
    double norm2 = 0.0;
    for (double c : x) norm2 += c * c;
    double q = static_cast<double>(2 * d + 1);
    double pi = 3.14159265358979323846;
    return std::pow(q / (4.0 * pi * t), 0.5 * d) * std::exp(-q * norm2 / (4.0 * t));
}

double local_clt_error(int d, int n) {
    if (n < 1) throw std::invalid_argument("local_clt_error: need n >= 1");
    LatticeMatrix an = a_power(d, n);
    int margin = 5;
    int r = an.radius + margin;
    int side = 2 * r + 1;
    std::size_t total = 1;
    for (int k = 0; k < d; ++k) total *= static_cast<std::size_t>(side);
    double worst = 0.0;
    std::vector<int> offset(d);
    std::vector<double> xd(d);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (int k = 0; k < d; ++k) {
            offset[k] = static_cast<int>(rem % static_cast<std::size_t>(side)) - r;
            xd[k] = offset[k];
            rem /= static_cast<std::size_t>(side);
        }
        double err = std::abs(an.at(offset) - gaussian_kernel(d, static_cast<double>(n), xd));
        if (err > worst) worst = err;
    }
    return worst;
}

}  // namespace hawkes
