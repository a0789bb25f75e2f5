#include "nlhelm/specfun.hpp"

#include <cmath>
#include <limits>

namespace nlhelm {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kZMax = 1.0e4;
// validated orders are nu <= 200; one extra order is admitted so the
// derivative relations f' = (nu/z) f - f_{nu+1} cover the whole range
constexpr int kTwoNuMax = 402;

void check_args(int two_nu, double z) {
  if (!(z > 0.0)) throw std::domain_error("bessel: z must be positive");
  if (two_nu < 0) throw std::domain_error("bessel: order must be nonnegative");
  if (z > kZMax || two_nu > kTwoNuMax)
    throw RangeError("bessel: (nu,z) outside validated range (nu<=200, z<=1e4)");
}

double prefactor(double z) { return std::sqrt(2.0 / (kPi * z)); }

// Y0, Y1 by the ascending series; good to ~1e-11 relative up to z ~ 14.
void y01_series(double z, double j0, double j1, double& y0, double& y1) {
  const long double q = 0.25L * (long double)z * (long double)z;
  const long double lg = std::log(0.5L * (long double)z) + kEulerGamma;

  long double sum0 = 0.0L, term = 1.0L, hk = 0.0L;
  for (int k = 1; k < 200; ++k) {
    term *= q / ((long double)k * k);
    hk += 1.0L / k;
    const long double c = (k % 2 ? term : -term) * hk;
    sum0 += c;
    if (std::abs((double)c) < 1e-22 * std::abs((double)sum0) && k > 4) break;
  }
  y0 = (2.0 / kPi) * (double)(lg * (long double)j0 + sum0);

  long double sum1 = 0.0L;
  term = 1.0L;  // 1/(k! (k+1)!) * q^k, starting k=0
  hk = 0.0L;
  long double hk1 = 1.0L;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      term *= q / ((long double)k * (k + 1));
      hk += 1.0L / k;
      hk1 += 1.0L / (k + 1);
    }
    const long double c = (k % 2 ? -term : term) * (hk + hk1 - 2.0L * kEulerGamma);
    sum1 += c;
    if (std::abs((double)c) < 1e-22 * std::abs((double)sum1) && k > 4) break;
  }
  // DLMF 10.8.1 with psi(k+1)+psi(k+2) = -2*gamma + H_k + H_{k+1}
  y1 = (2.0 / kPi) * std::log(0.5 * z) * j1 - 2.0 / (kPi * z) -
       (z / (2.0 * kPi)) * (double)sum1;
}

// H^(1)_n for n = 0, 1 by the large-argument expansion, truncated at the
// smallest term.  Used only for z >= ~14 where that term is ~e^{-2z}.
cplx hankel1_asymptotic_optimal(int n, double z) {
  const double fournu2 = 4.0 * n * n;
  cplx sum(0.0, 0.0);
  cplx ipow(1.0, 0.0);
  double a = 1.0;   // a_k(n)
  double zk = 1.0;  // z^k
  double prev = std::numeric_limits<double>::max();
  for (int k = 0; k < 200; ++k) {
    const double mag = std::abs(a) / zk;
    if (mag >= prev) break;  // stop at the smallest term
    prev = mag;
    sum += ipow * (a / zk);
    if (mag < 1e-18) break;
    a *= (fournu2 - (2.0 * k + 1.0) * (2.0 * k + 1.0)) / (8.0 * (k + 1.0));
    zk *= z;
    ipow *= cplx(0.0, 1.0);
  }
  const double w = z - 0.5 * n * kPi - 0.25 * kPi;
  return prefactor(z) * cplx(std::cos(w), std::sin(w)) * sum;
}

}  // namespace

BesselLadder bessel_jy_ladder(int two_mu, int max_index, double z) {
  if (two_mu != 0 && two_mu != 1)
    throw std::domain_error("bessel_jy_ladder: two_mu must be 0 or 1");
  check_args(two_mu + 2 * max_index, z);

  const double mu = 0.5 * two_mu;
  BesselLadder out;
  out.J.assign(max_index + 1, 0.0);
  out.Y.assign(max_index + 1, 0.0);

  // ---- J: Miller backward recurrence ------------------------------------
  // Start deep enough above max(nu, z) that the admixed growing solution is
  // damped below 1e-17 at the target orders; near k ~ z the damping is only
  // ~(e/2)^2 per step, hence the flat +70 margin.
  const double base = std::max(z, mu + max_index);
  const int nstart =
      static_cast<int>(std::ceil(base + 12.0 * std::sqrt(base + 1.0) + 70.0));

  double jp = 0.0;           // J~_{k+1}
  double jc = 1e-300;        // J~_{k}
  long double esum = 0.0L;   // even-order normalisation sum (integer case)
  for (int k = nstart; k >= 1; --k) {
    const double sigma = mu + k;  // order of jc
    double jm = (2.0 * sigma / z) * jc - jp;
    jp = jc;
    jc = jm;
    const int idx = k - 1;  // order of jc is mu + idx
    if (two_mu == 0 && idx % 2 == 0) esum += (long double)jc;
    if (idx <= max_index) out.J[idx] = jc;
    if (idx + 1 <= max_index) out.J[idx + 1] = jp;
    if (std::abs(jc) > 1e250) {
      jc *= 1e-250;
      jp *= 1e-250;
      esum *= 1e-250L;
      for (double& v : out.J) v *= 1e-250;
    }
  }

  double scale;
  if (two_mu == 0) {
    // J_0 + 2*sum_{k>=1} J_{2k} = 1
    const long double s = 2.0L * esum - (long double)jc;
    scale = (double)(1.0L / s);
  } else {
    // anchor on whichever of J_{1/2}, J_{3/2} is larger; they cannot both
    // be small since one tracks sin z and the other cos z
    const double pf = prefactor(z);
    const double ex0 = pf * std::sin(z);
    const double ex1 = pf * (std::sin(z) / z - std::cos(z));
    const double l0 = jc;  // ladder value at order 1/2
    const double l1 = jp;  // order 3/2
    scale = (std::abs(ex0) >= std::abs(ex1)) ? ex0 / l0 : ex1 / l1;
  }
  for (double& v : out.J) v *= scale;
  const double j_mu = jc * scale;
  const double j_mu1 = jp * scale;

  if (z < mu + max_index && std::abs(out.J[max_index]) < 1e-290)
    throw RangeError("bessel: J underflows at requested order");

  // ---- Y: upward recurrence from Y_mu, Y_mu+1 ----------------------------
  double y0, y1;
  if (two_mu == 1) {
    const double pf = prefactor(z);
    y0 = -pf * std::cos(z);                          // Y_{1/2}
    y1 = -pf * (std::cos(z) / z + std::sin(z));      // Y_{3/2}
  } else if (z < 14.0) {
    y01_series(z, j_mu, j_mu1, y0, y1);
  } else {
    y0 = hankel1_asymptotic_optimal(0, z).imag();
    y1 = hankel1_asymptotic_optimal(1, z).imag();
  }
  out.Y[0] = y0;
  if (max_index >= 1) out.Y[1] = y1;
  for (int k = 1; k < max_index; ++k) {
    const double sigma = mu + k;
    const double yn = (2.0 * sigma / z) * out.Y[k] - out.Y[k - 1];
    if (std::abs(yn) > 1e300)
      throw RangeError("bessel: Y overflows at requested order");
    out.Y[k + 1] = yn;
  }
  return out;
}

double bessel_j(Order nu, double z) {
  check_args(nu.two_nu, z);
  const int two_mu = nu.two_nu & 1;
  const int idx = (nu.two_nu - two_mu) / 2;
  return bessel_jy_ladder(two_mu, idx, z).J[idx];
}

double bessel_y(Order nu, double z) {
  check_args(nu.two_nu, z);
  const int two_mu = nu.two_nu & 1;
  const int idx = (nu.two_nu - two_mu) / 2;
  return bessel_jy_ladder(two_mu, idx, z).Y[idx];
}

cplx hankel(int kind, Order nu, double z) {
  if (kind != 1 && kind != 2) throw std::domain_error("hankel: kind must be 1 or 2");
  check_args(nu.two_nu, z);
  const int two_mu = nu.two_nu & 1;
  const int idx = (nu.two_nu - two_mu) / 2;
  const BesselLadder lad = bessel_jy_ladder(two_mu, idx, z);
  const double s = (kind == 1) ? 1.0 : -1.0;
  return cplx(lad.J[idx], s * lad.Y[idx]);
}

double bessel_j_prime(Order nu, double z) {
  return (nu.value() / z) * bessel_j(nu, z) - bessel_j(Order{nu.two_nu + 2}, z);
}

double bessel_y_prime(Order nu, double z) {
  return (nu.value() / z) * bessel_y(nu, z) - bessel_y(Order{nu.two_nu + 2}, z);
}

cplx hankel_prime(int kind, Order nu, double z) {
  return (nu.value() / z) * hankel(kind, nu, z) - hankel(kind, Order{nu.two_nu + 2}, z);
}

double poincare_coefficient(Order nu, int j) {
  const double fournu2 = (double)nu.two_nu * (double)nu.two_nu;
  double a = 1.0;
  for (int m = 1; m <= j; ++m)
    a *= (fournu2 - (2.0 * m - 1.0) * (2.0 * m - 1.0)) / (8.0 * m);
  return a;
}

cplx hankel_asymptotic(int kind, Order nu, double z, int terms) {
  if (kind != 1 && kind != 2) throw std::domain_error("hankel: kind must be 1 or 2");
  if (!(z > 0.0)) throw std::domain_error("hankel_asymptotic: z must be positive");
  if (terms < 1) throw std::domain_error("hankel_asymptotic: need at least one term");
  const double nuval = nu.value();
  const bool terminates = (nu.two_nu % 2 == 1) && ((nu.two_nu + 1) / 2 <= terms);
  if (!terminates && z < std::max(10.0, 2.0 * nuval * nuval))
    throw RegimeError("hankel_asymptotic: z below validity bound max(10, 2 nu^2)");

  const double s = (kind == 1) ? 1.0 : -1.0;
  const cplx i_s(0.0, s);
  cplx sum(0.0, 0.0);
  cplx ipow(1.0, 0.0);
  double a = 1.0;
  for (int j = 0; j < terms; ++j) {
    sum += ipow * (a / std::pow(z, j));
    a *= ((double)nu.two_nu * nu.two_nu - (2.0 * j + 1.0) * (2.0 * j + 1.0)) /
         (8.0 * (j + 1.0));
    ipow *= i_s;
  }
  const double w = z - 0.5 * nuval * kPi - 0.25 * kPi;
  return prefactor(z) * cplx(std::cos(s * w), std::sin(s * w)) * sum;
}

}  // namespace nlhelm
