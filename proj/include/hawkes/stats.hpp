#ifndef HAWKES_STATS_HPP
#define HAWKES_STATS_HPP

#include <vector>

namespace hawkes {

enum class Reference { exp1, std_normal };

struct TestVerdict {
    double statistic = 0.0;
    double p_value = 0.0;
    std::size_t sample_size = 0;
    double alpha = 0.01;
    bool pass = false;
};

// One-sample Kolmogorov-Smirnov test with the asymptotic p-value
// 2 sum_k (-1)^(k-1) exp(-2 k^2 n D^2), 100 terms. Requires n >= 20.
TestVerdict ks_test(std::vector<double> sample, Reference ref, double alpha = 0.01);

double normal_cdf(double x);
double exp1_cdf(double x);

struct SlopeFit {
    double slope = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double intercept = 0.0;
};

// Weighted least squares on (log x, log y); weights from the delta-method
// variance (stderr/y)^2 when stderrs are given (pass empty for unweighted).
// Requires >= 3 points, all x, y positive.
SlopeFit loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                      const std::vector<double>& y_stderr = {});

double mean(const std::vector<double>& v);
double sample_variance(const std::vector<double>& v);
double median(std::vector<double> v);
// Linear-interpolation quantile, q in [0, 1].
double quantile(std::vector<double> v, double q);
double correlation(const std::vector<double>& a, const std::vector<double>& b);

// P(Poisson(x) >= n) by the pmf recursion; n <= 0 gives 1.
double poisson_tail(double x, int n);

}  // namespace hawkes

#endif
