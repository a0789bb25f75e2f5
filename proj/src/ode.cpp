#include "nlhelm/ode.hpp"

#include <algorithm>
#include <cmath>

namespace nlhelm {

namespace {
// Dormand-Prince coefficients
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                 e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640,
                 e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
}  // namespace

void integrate_dp5(int dim, const OdeRhs& rhs, double& t,
                   std::vector<double>& y, double t_end, const OdeOptions& opt,
                   const OdeObserver& observer) {
  if (t == t_end) return;
  const double dir = (t_end > t) ? 1.0 : -1.0;
  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim),
      k7(dim), ytmp(dim), ynew(dim);

  rhs(t, y.data(), k1.data());
  // initial step ~ 0.05 / (norm-level rate); the controller refines it
  double ny = 0.0, nk = 0.0;
  for (int i = 0; i < dim; ++i) {
    ny = std::max(ny, std::abs(y[i]));
    nk = std::max(nk, std::abs(k1[i]));
  }
  const double rate = nk / (ny + opt.atol + 1e-300);
  double hctrl = std::abs(t_end - t);
  if (rate > 0.0) hctrl = std::min(hctrl, 0.05 / rate);
  if (opt.h_max > 0.0) hctrl = std::min(hctrl, opt.h_max);

  for (long step = 0; step < opt.max_steps; ++step) {
    if (dir * (t_end - t) <= 0.0) return;
    if (hctrl < 1e-14 * (std::abs(t) + 1.0))
      throw NumericalError("ode: step size underflow");
    bool clamped = false;
    double h = dir * hctrl;
    if (dir * (t + h - t_end) > 0.0) {
      h = t_end - t;
      clamped = true;
    }

    for (int i = 0; i < dim; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, ytmp.data(), k2.data());
    for (int i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, ytmp.data(), k3.data());
    for (int i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, ytmp.data(), k4.data());
    for (int i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, ytmp.data(), k5.data());
    for (int i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                            a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, ytmp.data(), k6.data());
    for (int i = 0; i < dim; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                            b6 * k6[i]);
    rhs(t + h, ynew.data(), k7.data());

    double err = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                            e6 * k6[i] + e7 * k7[i]);
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / dim);

    const bool accept = err <= 1.0;
    if (accept) {
      t += h;
      y = ynew;
      k1 = k7;  // FSAL
      if (observer) observer(t, y.data());
    }
    double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    fac = std::clamp(fac, 0.2, 5.0);
    if (accept && clamped) {
      // endpoint-shortened step: resume from the controller step
      hctrl = std::min(hctrl * std::max(fac, 1.0),
                       opt.h_max > 0.0 ? opt.h_max : hctrl * 5.0);
    } else {
      hctrl = std::abs(h) * fac;
      if (opt.h_max > 0.0) hctrl = std::min(hctrl, opt.h_max);
    }
  }
  throw NumericalError("ode: max step count exceeded");
}

}  // namespace nlhelm
