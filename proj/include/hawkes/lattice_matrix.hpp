#ifndef HAWKES_LATTICE_MATRIX_HPP
#define HAWKES_LATTICE_MATRIX_HPP

#include <vector>

namespace hawkes {

// One row of a translation-invariant lattice matrix: values over the offset
// box [-radius, radius]^d, centered at 0. A^n(i,j) = A^n(0, j-i).
struct LatticeMatrix {
    int d = 1;
    int radius = 0;
    std::vector<double> values;  // row-major over the box, size (2*radius+1)^d

    int side() const { return 2 * radius + 1; }
    std::size_t index(const std::vector<int>& offset) const;
    double at(const std::vector<int>& offset) const;  // 0 outside the box
    double at(int i) const;                           // d = 1 shorthand
    double row_sum() const;
    double second_moment() const;  // sum |i|^2 * value(i)
    double sum_of_squares() const; // sum value(i)^2
};

// A^n(0,.) by n-fold stencil convolution; the stencil is the self loop plus
// the 2d unit steps, each with weight 1/(2d+1).
LatticeMatrix a_power(int d, int n);

// Q_Lambda(0,.) = sum_n Lambda^n A^n(0,.), truncated at the first n with
// Lambda^n/(1-Lambda) < tol. Requires 0 <= Lambda < 1.
LatticeMatrix q_lambda(int d, double lambda, double tol = 1e-10);

// p_t(x) = ((2d+1)/(4 pi t))^(d/2) exp(-(2d+1)|x|^2/(4t)).
double gaussian_kernel(int d, double t, const std::vector<double>& x);

// max_i |A^n(0,i) - p_n(i)|, scanned over the support box plus a margin
// where A^n vanishes but p_n does not.
double local_clt_error(int d, int n);

}  // namespace hawkes

#endif
