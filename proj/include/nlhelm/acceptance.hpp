// The acceptance suite: one entry per structural claim, run at the
// reference resolution (n=3 zonal, lambda=1, L=16, M=4096, r_max ~ 200).
// Each criterion prints/returns an independent pass/fail with a measured
// number; cmd_selfcheck and the acceptance test binary both run this.
#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "nlhelm/nonlinear.hpp"

namespace nlhelm {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOptions {
  std::uint64_t base_seed = 2026;
  // selfcheck mutation hook: scales the resolvent Green constants so a
  // corrupted build fails with a named criterion; 1.0 in normal runs
  double kappa_scale = 1.0;
  std::ostream* log = nullptr;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});
bool all_passed(const std::vector<CriterionResult>& results);

// || FD(H - lambda^2 + V) u - F ||_w / ||F||_w over interior nodes
double resolvent_residual(const Field& u, const Field& F,
                          const RadialPotential* potential, double delta = 0.05);

// smooth compactly supported bump exp(-1/(1-s^2)), s = (r-center)/width,
// optionally Gaussian and optionally modulated by cos(osc_freq r) (to give
// wide packets spectral content near the energy shell)
Field bump_field(GridPtr grid, int dim_n, int max_mode, Rng& rng,
                 double center_lo, double center_hi, double width_lo,
                 double width_hi, bool gaussian = false, double osc_freq = 0.0);

}  // namespace nlhelm
