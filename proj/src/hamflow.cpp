#include "nlhelm/hamflow.hpp"

#include <cmath>

#include "nlhelm/ode.hpp"

namespace nlhelm {

double hamiltonian_p(const PhasePoint& pt, double lambda) {
  return pt.nu * pt.nu + pt.mu * pt.mu - lambda * lambda;
}

FlowResult flow(const PhasePoint& start, double lambda, double T,
                const FlowOptions& opt) {
  if (start.x < 0.0) throw PreconditionError("flow: x must be >= 0");
  if (start.x > 1.0) throw PreconditionError("flow: point outside x <= 1");
  FlowResult out;
  const double p0 = hamiltonian_p(start, lambda);
  const double dir = (T >= 0.0) ? 1.0 : -1.0;

  auto rhs = [dir](double, const double* y, double* dy) {
    // y = (x, y_angle, nu, mu); time reversal folds into dir
    dy[0] = dir * (-2.0 * y[2] * y[0]);
    dy[1] = dir * (2.0 * y[3]);
    dy[2] = dir * (2.0 * y[3] * y[3]);
    dy[3] = dir * (-2.0 * y[2] * y[3]);
  };

  std::vector<double> y = {start.x, start.y, start.nu, start.mu};
  double t = 0.0;
  double last_sample = -1e300;
  double last_nu = start.nu;
  out.samples.push_back({0.0, y[0], y[1], y[2], y[3], p0});

  auto classify = [&](const double* s) -> RadialLimit {
    if (std::abs(s[3]) < opt.classify_tol) {
      if (std::abs(s[2] - lambda) < opt.classify_tol) return RadialLimit::RPlus;
      if (std::abs(s[2] + lambda) < opt.classify_tol) return RadialLimit::RMinus;
    }
    if (s[0] > opt.x_escape) return RadialLimit::Escaped;
    return RadialLimit::Undecided;
  };

  // Integrate the unreflected zonal chart: the raw flow y' = 2 mu,
  // mu' = -2 nu mu never flips sign(mu); pole crossings are a chart
  // artifact, so the angle is folded only when a sample is recorded.
  auto fold = [&](double yraw, double mu, double& yout, double& muout) {
    if (opt.dim_n == 2) {
      yout = std::fmod(yraw, 2.0 * kPi);
      if (yout < 0.0) yout += 2.0 * kPi;
      muout = mu;
      return;
    }
    double m = std::fmod(yraw, 2.0 * kPi);
    if (m < 0.0) m += 2.0 * kPi;
    if (m <= kPi) {
      yout = m;
      muout = mu;
    } else {
      yout = 2.0 * kPi - m;
      muout = -mu;
    }
  };

  bool done = false;
  auto observer = [&](double tau, const double* s) {
    if (done) return;
    const double p = s[2] * s[2] + s[3] * s[3] - lambda * lambda;
    out.conservation_drift = std::max(out.conservation_drift, std::abs(p - p0));
    // nu is nondecreasing in forward time (nu' = 2 mu^2 >= 0)
    const double dnu = dir * (s[2] - last_nu);
    if (dnu < -1e-10) out.nu_monotone = false;
    last_nu = s[2];
    if (opt.sample_dt <= 0.0 || tau - last_sample >= opt.sample_dt) {
      if (out.samples.size() < opt.max_samples) {
        double yf, muf;
        fold(s[1], s[3], yf, muf);
        out.samples.push_back({dir * tau, s[0], yf, s[2], muf, p});
      }
      last_sample = tau;
    }
    const RadialLimit cls = classify(s);
    if (cls != RadialLimit::Undecided) {
      out.limit = cls;
      done = true;
    }
    out.time_reached = dir * tau;
  };

  // integrate in chunks so classification can stop the run
  OdeOptions oopt;
  oopt.rtol = opt.rtol;
  oopt.atol = opt.atol;
  const double Tabs = std::abs(T);
  const double chunk = Tabs / 64.0;
  out.limit = classify(y.data());
  if (out.limit != RadialLimit::Undecided) return out;
  for (int c = 0; c < 64 && !done; ++c)
    integrate_dp5(4, rhs, t, y, std::min(Tabs, (c + 1) * chunk), oopt, observer);
  return out;
}

}  // namespace nlhelm
