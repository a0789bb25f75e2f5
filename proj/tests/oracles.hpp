// Test-only oracles, kept independent of the library evaluation paths they
// check: a long-double ascending series for J, the explicit Poincare
// coefficient products, Simpson integration, a direct coefficient
// convolution for cubic products on the circle, and a centered-difference
// Laplacian on the sphere.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

// J_nu(z) by the ascending series in long double; ~1e-16 relative for
// z <~ 15, any nonnegative order stored as 2 nu.
inline long double bessel_j_series(int two_nu, long double z) {
  const long double nu = 0.5L * two_nu;
  const long double q = 0.25L * z * z;
  long double term = std::pow(z / 2.0L, nu) / std::exp(std::lgamma(nu + 1.0L));
  long double sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= -q / ((long double)k * (nu + k));
    sum += term;
    if (std::abs(term) < 1e-25L * std::abs(sum)) break;
  }
  return sum;
}

// a_j(nu) = prod_{m=1..j} (4 nu^2 - (2m-1)^2) / (j! 8^j), explicit product
inline long double poincare_a(int two_nu, int j) {
  const long double fournu2 = (long double)two_nu * two_nu;
  long double a = 1.0L;
  for (int m = 1; m <= j; ++m)
    a *= (fournu2 - (2.0L * m - 1.0L) * (2.0L * m - 1.0L)) / (8.0L * m);
  return a;
}

// composite Simpson on [a, b]
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// coefficients of u^2 conj(u) on the circle in the orthonormal Fourier
// basis e^{il theta}/sqrt(2pi):  out_k = (1/2pi) sum_{m1+m2-m3=k} a a abar
inline std::vector<std::complex<double>> cubic_convolution(
    const std::vector<std::complex<double>>& a, int L_in, int L_out) {
  std::vector<std::complex<double>> out(2 * L_out + 1, {0.0, 0.0});
  const double inv2pi = 1.0 / (2.0 * 3.14159265358979323846);
  for (int m1 = -L_in; m1 <= L_in; ++m1)
    for (int m2 = -L_in; m2 <= L_in; ++m2)
      for (int m3 = -L_in; m3 <= L_in; ++m3) {
        const int k = m1 + m2 - m3;
        if (k < -L_out || k > L_out) continue;
        out[k + L_out] += inv2pi * a[m1 + L_in] * a[m2 + L_in] *
                          std::conj(a[m3 + L_in]);
      }
  return out;
}

}  // namespace oracle
