// Gauss-Legendre rules and finite-difference stencil weights.
#pragma once

#include <cstddef>
#include <vector>

namespace nlhelm {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;  // sum to 2
};

// n-point Gauss-Legendre rule, Newton iteration on P_n. Exact for
// polynomials of degree <= 2n-1.
GaussRule gauss_legendre(int n);

// Fornberg weights for the m-th derivative at x0 from the given sample
// points (need not be equispaced). Returns one weight per point.
std::vector<double> fd_weights(double x0, const std::vector<double>& x, int m);

// Lagrange interpolation weights: value at x0 of the cardinal polynomials
// through the points x.  fd_weights with m = 0 specialised for clarity.
std::vector<double> lagrange_weights(double x0, const std::vector<double>& x);

}  // namespace nlhelm
