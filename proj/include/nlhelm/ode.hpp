// Adaptive Dormand-Prince 5(4) integrator.
#pragma once

#include <functional>
#include <vector>

#include "nlhelm/types.hpp"

namespace nlhelm {

struct OdeOptions {
  double rtol = 1e-11;
  double atol = 1e-280;  // tiny absolute floor; tolerances are relative
  double h_max = 0.0;    // 0 = no cap
  long max_steps = 2000000;
};

using OdeRhs = std::function<void(double t, const double* y, double* dydt)>;
using OdeObserver = std::function<void(double t, const double* y)>;

// Integrate y' = rhs(t, y) in place from t to t_end (either direction).
// observer, when given, fires after every accepted step (including the
// clamped final one).  Throws NumericalError on step-size failure.
void integrate_dp5(int dim, const OdeRhs& rhs, double& t,
                   std::vector<double>& y, double t_end, const OdeOptions& opt,
                   const OdeObserver& observer = nullptr);

}  // namespace nlhelm
