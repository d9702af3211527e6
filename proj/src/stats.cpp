#include "hawkes/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hawkes {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / 1.4142135623730950488); }

double exp1_cdf(double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); }

namespace {
double kolmogorov_p(double lambda) {
    // Survival function of the Kolmogorov distribution at lambda.
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        sum += sign * std::exp(-2.0 * k * k * lambda * lambda);
        sign = -sign;
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}
}  // namespace

TestVerdict ks_test(std::vector<double> sample, Reference ref, double alpha) {
    if (sample.size() < 20) throw std::invalid_argument("ks_test: need at least 20 samples");
    std::sort(sample.begin(), sample.end());
    auto n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = ref == Reference::exp1 ? exp1_cdf(sample[i]) : normal_cdf(sample[i]);
        double lo = f - static_cast<double>(i) / n;
        double hi = static_cast<double>(i + 1) / n - f;
        d = std::max(d, std::max(lo, hi));
    }
    TestVerdict v;
    v.statistic = d;
    v.p_value = kolmogorov_p(std::sqrt(n) * d);
    v.sample_size = sample.size();
    v.alpha = alpha;
    v.pass = v.p_value > alpha;
    return v;
}

SlopeFit loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                      const std::vector<double>& y_stderr) {
    if (x.size() != y.size() || x.size() < 3) throw std::invalid_argument("loglog_slope: need >= 3 matched points");
    if (!y_stderr.empty() && y_stderr.size() != y.size()) {
        throw std::invalid_argument("loglog_slope: stderr size mismatch");
    }
    std::size_t n = x.size();
    std::vector<double> lx(n), ly(n), w(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0) throw std::invalid_argument("loglog_slope: values must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        if (!y_stderr.empty() && y_stderr[i] > 0.0) {
            double rel = y_stderr[i] / y[i];
            w[i] = 1.0 / (rel * rel);
        }
    }
    double sw = 0.0, swx = 0.0, swy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sw += w[i];
        swx += w[i] * lx[i];
        swy += w[i] * ly[i];
    }
    double xbar = swx / sw, ybar = swy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += w[i] * (lx[i] - xbar) * (lx[i] - xbar);
        sxy += w[i] * (lx[i] - xbar) * (ly[i] - ybar);
    }
    if (sxx <= 0.0) throw std::invalid_argument("loglog_slope: degenerate abscissae");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    // Residual-scaled standard error; zero residuals give a zero-width CI.
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = ly[i] - fit.intercept - fit.slope * lx[i];
        rss += w[i] * r * r;
    }
    double scale = n > 2 ? rss / static_cast<double>(n - 2) : 0.0;
    double se = std::sqrt(scale / sxx);
    fit.ci_low = fit.slope - 1.96 * se;
    fit.ci_high = fit.slope + 1.96 * se;
    return fit;
}

double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean: empty sample");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
    if (v.size() < 2) throw std::invalid_argument("sample_variance: need >= 2 samples");
    double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median: empty sample");
    std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
    return 0.5 * (hi + v[mid - 1]);
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw std::invalid_argument("quantile: empty sample");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0,1]");
    std::sort(v.begin(), v.end());
    double pos = q * static_cast<double>(v.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= v.size()) return v.back();
    double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[lo + 1] - v[lo]);
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("correlation: need matched samples");
    double ma = mean(a), mb = mean(b);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
        sab += (a[i] - ma) * (b[i] - mb);
    }
    if (saa <= 0.0 || sbb <= 0.0) throw std::invalid_argument("correlation: degenerate sample");
    return sab / std::sqrt(saa * sbb);
}

double poisson_tail(double x, int n) {
    if (n <= 0) return 1.0;
    if (x <= 0.0) return 0.0;
    if (static_cast<double>(n) <= x) {
        // tail is order one: the complement of the lower sum is stable
        double pmf = std::exp(-x);
        double cdf = pmf;
        for (int k = 1; k < n; ++k) {
            pmf *= x / static_cast<double>(k);
            cdf += pmf;
        }
        return std::max(0.0, 1.0 - cdf);
    }
    // deep tail: sum upward from n, all terms positive, so the result keeps
    // full relative accuracy (the complement route cancels to noise here,
    // which matters because callers scale tails by Lambda^n)
    double term = std::exp(n * std::log(x) - x - std::lgamma(static_cast<double>(n) + 1.0));
    double sum = term;
    for (int k = n; term > sum * 1e-18; ++k) {
        term *= x / static_cast<double>(k + 1);
        sum += term;
    }
    return sum;
}

}  // namespace hawkes
