// Rescaled Hamilton flow on scattering phase space over the boundary
// sphere, and source/sink classification at the radial sets
// R+- = { x = 0, mu = 0, nu = +-lambda }.
//
// Vector field (flat metric, round sphere):
//   x' = -2 nu x,  y' = 2 mu,  nu' = 2 |mu|^2,  mu' = -2 nu mu,
// restricted to zonal data for n = 3 (y = theta, mu = mu_theta); a pole
// crossing is continued by the reflection (y, mu) -> (-y, -mu).
#pragma once

#include <array>
#include <vector>

#include "nlhelm/types.hpp"

namespace nlhelm {

struct PhasePoint {
  double x = 0.0;   // boundary defining function 1/r, x >= 0
  double y = 0.0;   // angle on the boundary
  double nu = 0.0;  // radial momentum
  double mu = 0.0;  // rescaled angular momentum
};

enum class RadialLimit { RPlus, RMinus, Escaped, Undecided };

struct FlowOptions {
  int dim_n = 3;
  double rtol = 1e-10;
  double atol = 1e-12;
  double classify_tol = 1e-6;   // |nu -+ lambda|, |mu| threshold
  double x_escape = 0.05;       // leaving the boundary slab
  std::size_t max_samples = 100000;
  double sample_dt = 0.0;       // 0 = record every accepted step
};

struct FlowResult {
  // rows (t, x, y, nu, mu, p)
  std::vector<std::array<double, 6>> samples;
  RadialLimit limit = RadialLimit::Undecided;
  double conservation_drift = 0.0;  // max |p(t) - p(0)|
  bool nu_monotone = true;          // nondecreasing in forward time
  double time_reached = 0.0;
};

// p = nu^2 + |mu|^2 - lambda^2 (round metric)
double hamiltonian_p(const PhasePoint& pt, double lambda);

// Integrate for |T| in the direction of sign(T); classification fires as
// soon as the point enters the tolerance ball of a radial set.
FlowResult flow(const PhasePoint& start, double lambda, double T,
                const FlowOptions& opt = {});

}  // namespace nlhelm
