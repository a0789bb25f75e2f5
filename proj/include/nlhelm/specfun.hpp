// Bessel and Hankel functions of integer and half-integer order.
//
// Evaluation strategy: J by Miller-type backward recurrence (normalised
// against the even-order sum for integer orders, against the closed-form
// J_{1/2}, J_{3/2} pair for half-integer orders); Y by upward recurrence
// from Y_mu, Y_{mu+1} (series for small argument, optimally truncated
// large-argument expansion otherwise); H^(1,2) = J +- iY.  No external
// special-function dependency.
//
// Validated range: 0 < z <= 1e4, 0 <= nu <= 200, with representable
// results; requests outside it raise RangeError.
#pragma once

#include <vector>

#include "nlhelm/types.hpp"

namespace nlhelm {

// Order nu stored as 2*nu so integer and half-integer orders stay exact.
struct Order {
  int two_nu = 0;
  double value() const { return 0.5 * two_nu; }
};

inline Order order_for_mode(int dim_n, int ell) {
  // nu = ell + (n-2)/2:  n=3 gives ell+1/2, n=2 gives |ell|
  if (dim_n == 3) return Order{2 * ell + 1};
  return Order{2 * (ell < 0 ? -ell : ell)};
}

// J and Y for the orders mu + k, k = 0..max_index, at fixed z,
// where mu = two_mu/2 and two_mu is 0 or 1.
struct BesselLadder {
  std::vector<double> J;
  std::vector<double> Y;
};
BesselLadder bessel_jy_ladder(int two_mu, int max_index, double z);

double bessel_j(Order nu, double z);
double bessel_y(Order nu, double z);
cplx hankel(int kind, Order nu, double z);

// d/dz, via the order-raising relation f' = (nu/z) f - f_{nu+1}
double bessel_j_prime(Order nu, double z);
double bessel_y_prime(Order nu, double z);
cplx hankel_prime(int kind, Order nu, double z);

// Truncated Poincare expansion
//   sqrt(2/(pi z)) e^{+-i(z - nu pi/2 - pi/4)} sum_{j<terms} (+-i)^j a_j(nu)/z^j
// with a_j(nu) = prod_{m=1..j} (4nu^2-(2m-1)^2) / (j! 8^j).  Requires
// z >= max(10, 2 nu^2) unless the series terminates within `terms`
// (half-integer nu with nu + 1/2 <= terms), in which case it is exact.
cplx hankel_asymptotic(int kind, Order nu, double z, int terms);

// a_j(nu) of the expansion above (used by coefficient-level checks).
double poincare_coefficient(Order nu, int j);

}  // namespace nlhelm
