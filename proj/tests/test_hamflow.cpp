#include <doctest.h>

#include <cmath>

#include "nlhelm/hamflow.hpp"

using namespace nlhelm;

TEST_CASE("hamiltonian_p on and off the characteristic set") {
  const double lambda = 1.3;
  CHECK(hamiltonian_p({0.0, 0.5, lambda, 0.0}, lambda) == 0.0);
  CHECK(hamiltonian_p({0.0, 0.5, 0.0, lambda}, lambda) == 0.0);
  CHECK(hamiltonian_p({0.0, 0.5, lambda, lambda}, lambda) ==
        doctest::Approx(lambda * lambda));
}

TEST_CASE("radial points are fixed points") {
  const double lambda = 1.0;
  FlowOptions opt;
  const FlowResult r = flow({0.0, 1.0, lambda, 0.0}, lambda, 50.0, opt);
  CHECK(r.limit == RadialLimit::RPlus);
  const FlowResult rm = flow({0.0, 1.0, -lambda, 0.0}, lambda, 50.0, opt);
  CHECK(rm.limit == RadialLimit::RMinus);
}

TEST_CASE("equator point flows to R+ forward and R- backward") {
  const double lambda = 1.0;
  FlowOptions opt;
  const PhasePoint pt{0.0, 1.2, 0.0, lambda};
  const FlowResult fwd = flow(pt, lambda, 200.0, opt);
  CHECK(fwd.limit == RadialLimit::RPlus);
  CHECK(fwd.conservation_drift <= 1e-8);
  CHECK(fwd.nu_monotone);
  const FlowResult bwd = flow(pt, lambda, -200.0, opt);
  CHECK(bwd.limit == RadialLimit::RMinus);
  CHECK(bwd.nu_monotone);
}

TEST_CASE("off-characteristic points conserve p and stay unclassified") {
  const double lambda = 1.0;
  FlowOptions opt;
  const PhasePoint pt{0.0, 0.8, lambda, lambda};  // p = lambda^2 != 0
  const FlowResult r = flow(pt, lambda, 50.0, opt);
  CHECK(r.conservation_drift <= 1e-8);
  CHECK(r.limit == RadialLimit::Undecided);
}

TEST_CASE("n=3 pole crossing keeps the fold consistent") {
  const double lambda = 1.0;
  FlowOptions opt;
  opt.dim_n = 3;
  const PhasePoint pt{0.0, 3.0, -0.8, std::sqrt(1.0 - 0.64)};
  const FlowResult r = flow(pt, lambda, 200.0, opt);
  CHECK(r.limit == RadialLimit::RPlus);
  CHECK(r.conservation_drift <= 1e-8);
  for (const auto& row : r.samples) {
    CHECK(row[2] >= 0.0);
    CHECK(row[2] <= kPi);
    // folded samples stay on the characteristic set
    CHECK(std::abs(row[3] * row[3] + row[4] * row[4] - 1.0) < 1e-7);
  }
}

TEST_CASE("interior slab points near R- escape outward in x") {
  const double lambda = 1.0;
  FlowOptions opt;
  // nu pinned near -lambda: x' = -2 nu x ~ +2x for a long stretch
  const PhasePoint pt{0.009, 0.5, -lambda, 0.01};
  const FlowResult r = flow(pt, lambda, 400.0, opt);
  CHECK(r.limit == RadialLimit::Escaped);
  CHECK_THROWS_AS(flow({-0.1, 0.0, 0.0, 1.0}, lambda, 1.0, opt),
                  PreconditionError);
}
