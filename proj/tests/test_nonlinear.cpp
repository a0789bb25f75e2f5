#include <doctest.h>

#include <cmath>

#include "nlhelm/nonlinear.hpp"
#include "oracles.hpp"

using namespace nlhelm;

namespace {
SolverConfig small_cfg(int L = 4, std::size_t M = 2048) {
  SolverConfig cfg;
  cfg.dim_n = 3;
  cfg.lambda = 1.0;
  cfg.max_mode = L;
  cfg.sobolev_k = 2;
  cfg.r_min = 0.02;
  cfg.grid_nodes = M;
  cfg.tol = 1e-11;
  cfg.max_iter = 25;
  return cfg;
}
}  // namespace

TEST_CASE("Nonlinearity validation and flags") {
  CHECK_THROWS_AS(Nonlinearity::gauge(4, cplx(1, 0)), PreconditionError);
  Nonlinearity bad;
  bad.p = 3;
  bad.monomials.push_back({cplx(1, 0), 1, 0});  // degree 1 < p
  CHECK_THROWS_AS(bad.validate(), PreconditionError);

  const Nonlinearity cubic = Nonlinearity::gauge(3, cplx(1, 0));
  CHECK(cubic.gauge_real());
  CHECK(!cubic.admissible_strict(3));  // (p-1)(n-1) = 4, not > 4
  CHECK(Nonlinearity::gauge(5, cplx(1, 0)).admissible_strict(3));
  CHECK(!Nonlinearity::gauge(5, cplx(1, 0)).admissible_strict(2));
  CHECK(!Nonlinearity::gauge(3, cplx(0, 1)).gauge_real());
}

TEST_CASE("evaluate_N: zero field, pointwise gauge value, aliasing oracle") {
  // n=2, angularly constant per radius: N = |u|^2 u pointwise
  const GridPtr g = make_radial_grid(1.0, 0.1, 4.0, 40.0, 512, 4);
  Field u = Field::zeros(2, 2, g);
  CHECK(field_l2_norm(evaluate_N(u, Nonlinearity::gauge(3, cplx(1, 0)), 0)) == 0.0);

  for (std::size_t i = 0; i < g->size(); ++i)
    u.mode(0).values[i] = cplx(std::sin(0.1 * i), 0.3);
  const Field N = evaluate_N(u, Nonlinearity::gauge(3, cplx(1, 0)), 0);
  for (std::size_t i = 0; i < g->size(); i += 41) {
    const cplx c = u.mode(0).values[i];
    const cplx expect = std::norm(c) * c / (2.0 * kPi);
    CHECK(std::abs(N.mode(0).values[i] - expect) < 1e-13);
    for (int ell = 1; ell <= 2; ++ell) {
      CHECK(std::abs(N.mode(ell).values[i]) < 1e-14);
      CHECK(std::abs(N.mode(-ell).values[i]) < 1e-14);
    }
  }

  // multi-mode aliasing against the direct convolution oracle
  Rng rng(5);
  const int L = 3;
  Field w = Field::zeros(2, L, g);
  for (int ell = -L; ell <= L; ++ell)
    w.mode(ell).values[7] = cplx(rng.sym(), rng.sym());
  const Field Nw = evaluate_N(w, Nonlinearity::gauge(3, cplx(1, 0)), 0);
  std::vector<cplx> a(2 * L + 1);
  for (int ell = -L; ell <= L; ++ell) a[ell + L] = w.mode(ell).values[7];
  const auto conv = oracle::cubic_convolution(a, L, L);
  for (int ell = -L; ell <= L; ++ell)
    CHECK(std::abs(Nw.mode(ell).values[7] - conv[ell + L]) < 1e-13);
}

TEST_CASE("weighted_norm: homogeneity and quadrature oracle") {
  const GridPtr g = make_radial_grid(1.0, 0.05, 5.0, 60.0, 2048, 4);
  CHECK(weighted_norm(Field::zeros(3, 1, g), 0.05) == 0.0);
  const ModeTable table(g, 3, 1, nullptr);
  BoundaryData f = BoundaryData::zeros(3, 1);
  f.at(0) = cplx(0.8, -0.4);
  const Field u0 = poisson_apply(f, table);
  const double n1 = weighted_norm(u0, 0.05);
  CHECK(weighted_norm(cplx(-2.5, 1.0) * u0, 0.05) ==
        doctest::Approx(std::abs(cplx(-2.5, 1.0)) * n1).epsilon(1e-12));

  // against a fine Simpson quadrature of the closed-form mode profile
  const cplx c = std::sqrt(2.0 * kPi) *
                 cplx(std::cos(kPi / 2), -std::sin(kPi / 2)) * f.at(0);
  auto integrand = [&](double r) {
    const double phi = std::sqrt(2.0 / kPi) * std::sin(r) / r;
    return std::pow(1.0 + r * r, -0.55) * std::norm(c) * phi * phi * r * r;
  };
  const double ref = std::sqrt(oracle::simpson(integrand, g->r_min, g->r_max, 400000));
  CHECK(n1 == doctest::Approx(ref).epsilon(1e-6));
  CHECK_THROWS_AS(weighted_norm(u0, 0.0), std::domain_error);
}

TEST_CASE("picard_solve: linear and zero-data fixed points") {
  const SolverConfig cfg = small_cfg();
  Rng rng(7);
  const BoundaryData f = random_boundary_data(3, 4, 2, 0.3, rng);

  const SolveResult lin = picard_solve(f, Nonlinearity::none(), cfg);
  CHECK(lin.converged);
  CHECK(lin.iterates == 1);
  CHECK(hk_norm(lin.b1, 0) < 1e-12);
  double worst = 0.0;
  for (int ell = 0; ell <= 4; ++ell) {
    const double nu = ell + 0.5;
    const cplx mult(std::cos(nu * kPi + kPi / 2), -std::sin(nu * kPi + kPi / 2));
    worst = std::max(worst, std::abs(lin.b_total.at(ell) - mult * f.at(ell)));
  }
  CHECK(worst < 1e-9);
  CHECK(lin.pde_residual < 1e-6);
  CHECK(flux_check(f, lin.b_total, Nonlinearity::none()) < 1e-10);

  const SolveResult zero =
      picard_solve(BoundaryData::zeros(3, 4), Nonlinearity::gauge(3, cplx(1, 0)), cfg);
  CHECK(zero.converged);
  CHECK(hk_norm(zero.b_total, 0) == 0.0);
  CHECK(field_l2_norm(zero.u) == 0.0);
}

TEST_CASE("picard_solve: cubic solve diagnostics and Born closeness") {
  const SolverConfig cfg = small_cfg();
  Rng rng(11);
  const BoundaryData f = random_boundary_data(3, 4, 2, 0.05, rng);
  const Nonlinearity N = Nonlinearity::gauge(3, cplx(1, 0));
  const SolveResult res = picard_solve(f, N, cfg);
  CHECK(res.converged);
  CHECK(!res.admissible_strict);  // recorded, not enforced
  CHECK(res.pde_residual < 1e-5);
  CHECK(res.flux_defect < 1e-5);
  // update norms strictly decreasing on a converged run
  for (std::size_t m = 0; m + 1 < res.update_norms.size(); ++m)
    CHECK(res.update_norms[m + 1] < res.update_norms[m]);
  // first correction is the Born term up to higher order in ||f||
  const BoundaryData born = born_term(f, N, cfg);
  CHECK(hk_norm(res.b1 - born, 0) < 1e-3 * hk_norm(born, 0));
  CHECK(hk_norm(res.b1 - born, 0) > 0.0);
}

TEST_CASE("gauge phase equivariance and rotation equivariance") {
  // phase: f -> e^{ia} f rotates b by e^{ia} for |u|^2 u
  {
    const SolverConfig cfg = small_cfg(3, 1536);
    Rng rng(13);
    const BoundaryData f = random_boundary_data(3, 3, 2, 0.06, rng);
    const Nonlinearity N = Nonlinearity::gauge(3, cplx(-1, 0));
    const cplx phase = std::exp(cplx(0.0, 0.83));
    const SolveResult r1 = picard_solve(f, N, cfg);
    const SolveResult r2 = picard_solve(phase * f, N, cfg);
    CHECK(hk_norm(r2.b_total - phase * r1.b_total, 0) <=
          1e-10 * hk_norm(r1.b_total, 0));
  }
  // rotation (n=2): mode-l coefficient times e^{il theta0}
  {
    SolverConfig cfg = small_cfg(3, 1536);
    cfg.dim_n = 2;
    Rng rng(17);
    const BoundaryData f = random_boundary_data(2, 3, 2, 0.06, rng);
    const Nonlinearity N = Nonlinearity::gauge(3, cplx(1, 0));
    const double th = 0.37;
    BoundaryData fr = f;
    for (int ell = -3; ell <= 3; ++ell)
      fr.at(ell) = f.at(ell) * std::exp(cplx(0, ell * th));
    const SolveResult r1 = picard_solve(f, N, cfg);
    const SolveResult r2 = picard_solve(fr, N, cfg);
    BoundaryData br = r1.b_total;
    for (int ell = -3; ell <= 3; ++ell)
      br.at(ell) = r1.b_total.at(ell) * std::exp(cplx(0, ell * th));
    CHECK(hk_norm(r2.b_total - br, 0) <= 1e-10 * hk_norm(br, 0));
  }
}

TEST_CASE("flux_check preconditions and SolveResult defect diagnostics") {
  Rng rng(19);
  const BoundaryData f = random_boundary_data(3, 2, 2, 0.1, rng);
  const BoundaryData b = random_boundary_data(3, 2, 2, 0.1, rng);
  CHECK_THROWS_AS(flux_check(f, b, Nonlinearity::gauge(3, cplx(0, 1))),
                  PreconditionError);
  Nonlinearity offgauge;
  offgauge.p = 3;
  offgauge.monomials.push_back({cplx(1, 0), 3, 0});  // u^3, not |u|^2 u
  CHECK_THROWS_AS(flux_check(f, b, offgauge), PreconditionError);
  CHECK_THROWS_AS(flux_check(BoundaryData::zeros(3, 2), b,
                             Nonlinearity::gauge(3, cplx(1, 0))),
                  PreconditionError);

  // the c = i gain/loss diagnostic is still reported on the SolveResult
  const SolverConfig cfg = small_cfg(2, 1536);
  const SolveResult res = picard_solve(f, Nonlinearity::gauge(3, cplx(0, 1)), cfg);
  CHECK(res.converged);
  CHECK(res.flux_defect > 1e-8);
}

TEST_CASE("threshold_search: linear data has no threshold; |c| monotone") {
  SolverConfig cfg = small_cfg(1, 1024);
  cfg.max_iter = 18;
  Rng rng(23);
  const BoundaryData dir = random_boundary_data(3, 1, 2, 1.0, rng);
  CHECK(threshold_search(dir, Nonlinearity::none(), cfg, 0.01, 3.0) == 3.0);
  const double t1 = threshold_search(dir, Nonlinearity::gauge(3, cplx(4, 0)),
                                     cfg, 0.01, 3.0);
  const double t2 = threshold_search(dir, Nonlinearity::gauge(3, cplx(16, 0)),
                                     cfg, 0.01, 3.0);
  CHECK(t1 < 3.0);
  CHECK(t2 < t1);  // stronger coupling, smaller ball
  CHECK_THROWS_AS(threshold_search(dir, Nonlinearity::gauge(3, cplx(1e6, 0)),
                                   cfg, 2.0, 3.0),
                  PreconditionError);

  // at half the measured threshold the run contracts with roughly constant
  // factors after the first couple of iterates
  {
    SolverConfig chalf = cfg;
    chalf.max_data_norm = 10.0;
    chalf.tol = 1e-12;
    const BoundaryData fh = cplx(0.5 * t1, 0.0) * dir;
    const SolveResult res =
        picard_solve(fh, Nonlinearity::gauge(3, cplx(4, 0)), chalf);
    CHECK(res.converged);
    REQUIRE(res.contraction_factors.size() >= 3);
    for (double c : res.contraction_factors) CHECK(c < 1.0);
    const double c2 = res.contraction_factors[1];
    const double c3 = res.contraction_factors[2];
    CHECK(std::abs(c3 - c2) < 0.5 * c2);
  }
}

TEST_CASE("divergence is detected and reported") {
  SolverConfig cfg = small_cfg(1, 1024);
  cfg.max_data_norm = 1e9;
  cfg.max_iter = 40;
  Rng rng(29);
  const BoundaryData f = random_boundary_data(3, 1, 2, 2.5, rng);
  try {
    const SolveResult res =
        picard_solve(f, Nonlinearity::gauge(3, cplx(40.0, 0)), cfg);
    CHECK(!res.converged);
    CHECK(res.status.substr(0, 8) == "diverged");
  } catch (const NumericalError&) {
    // overflow escape from evaluate_N is also an acceptable signal
    CHECK(true);
  }
}

TEST_CASE("picard data-norm precondition") {
  SolverConfig cfg = small_cfg(1, 1024);
  cfg.max_data_norm = 0.1;
  Rng rng(31);
  const BoundaryData f = random_boundary_data(3, 1, 2, 0.5, rng);
  CHECK_THROWS_AS(picard_solve(f, Nonlinearity::gauge(3, cplx(1, 0)), cfg),
                  PreconditionError);
}
