#include <doctest.h>

#include <cmath>

#include "nlhelm/angular.hpp"

using namespace nlhelm;

TEST_CASE("synth basics") {
  for (int n : {2, 3}) {
    const AngularGrid grid = make_angular_grid(n, 4);
    const BoundaryData zero = BoundaryData::zeros(n, 4);
    for (const cplx& v : synth(zero, grid)) CHECK(std::abs(v) == 0.0);
  }
  // n=3, single mode l=0 with coefficient 1: constant 1/sqrt(4 pi)
  BoundaryData f = BoundaryData::zeros(3, 4);
  f.at(0) = 1.0;
  const AngularGrid grid = make_angular_grid(3, 4);
  for (const cplx& v : synth(f, grid))
    CHECK(std::abs(v - 1.0 / std::sqrt(4.0 * kPi)) < 1e-15);
}

TEST_CASE("analyze is a left inverse of synth on band-limited data") {
  for (int n : {2, 3}) {
    Rng rng(42 + n);
    const int L = 7;
    const AngularGrid grid = make_angular_grid(n, L);
    const BoundaryData f = random_boundary_data(n, L, 0, 1.0, rng);
    const BoundaryData back = analyze(synth(f, grid), grid, L);
    CHECK(hk_norm(back - f, 0) <= 1e-12 * hk_norm(f, 0));
  }
}

TEST_CASE("Parseval under the quadrature") {
  for (int n : {2, 3}) {
    Rng rng(7 + n);
    const int L = 6;
    const AngularGrid grid = make_angular_grid(n, L);
    const BoundaryData f = random_boundary_data(n, L, 0, 2.0, rng);
    const auto vals = synth(f, grid);
    const double l2grid = std::sqrt(grid_inner(vals, vals, grid).real());
    CHECK(l2grid == doctest::Approx(hk_norm(f, 0)).epsilon(1e-12));
  }
}

TEST_CASE("laplace_beltrami eigenvalues and symmetry") {
  // constant data is annihilated
  for (int n : {2, 3}) {
    BoundaryData f = BoundaryData::zeros(n, 3);
    f.at(0) = 2.5;
    CHECK(hk_norm(laplace_beltrami(f), 0) == 0.0);
  }
  // n=3, mode 1: eigenvalue -2
  {
    BoundaryData f = BoundaryData::zeros(3, 3);
    f.at(1) = 1.0;
    CHECK(laplace_beltrami(f).at(1) == cplx(-2.0, 0.0));
  }
  // symmetry <Lap f, g> = <f, Lap g> under the quadrature inner product
  for (int n : {2, 3}) {
    Rng rng(11 + n);
    const int L = 5;
    const AngularGrid grid = make_angular_grid(n, L);
    const BoundaryData f = random_boundary_data(n, L, 0, 1.0, rng);
    const BoundaryData g = random_boundary_data(n, L, 0, 1.0, rng);
    const cplx a = grid_inner(synth(laplace_beltrami(f), grid), synth(g, grid), grid);
    const cplx b = grid_inner(synth(f, grid), synth(laplace_beltrami(g), grid), grid);
    CHECK(std::abs(a - b) <= 1e-12 * (std::abs(a) + 1.0));
  }
}

TEST_CASE("laplace_beltrami against a centered-difference oracle") {
  // evaluate Lap f on a fine theta grid by finite differences of synth
  for (int n : {2, 3}) {
    Rng rng(23 + n);
    const int L = 4;
    const BoundaryData f = random_boundary_data(n, L, 0, 1.0, rng);
    const BoundaryData lf = laplace_beltrami(f);
    auto eval = [&](const BoundaryData& d, double theta) {
      cplx acc(0, 0);
      for (int ell : mode_list(n, L)) {
        if (n == 2)
          acc += d.at(ell) * std::exp(cplx(0, ell * theta)) / std::sqrt(2 * kPi);
        else {
          // normalised Legendre in cos(theta)
          const double t = std::cos(theta);
          double p0 = 1.0, p1 = t, pl = (ell == 0) ? 1.0 : t;
          for (int l = 2; l <= ell; ++l) {
            const double p2 = ((2.0 * l - 1.0) * t * p1 - (l - 1.0) * p0) / l;
            p0 = p1;
            p1 = p2;
            pl = p2;
          }
          acc += d.at(ell) * std::sqrt((2.0 * ell + 1) / (4 * kPi)) * pl;
        }
      }
      return acc;
    };
    double h1 = 1e-3;
    double worst = 0.0;
    for (double theta : {0.7, 1.3, 2.2}) {
      // Lap = d^2/dtheta^2 (n=2);  + cot(theta) d/dtheta (n=3 zonal)
      const cplx d2 =
          (eval(f, theta + h1) - 2.0 * eval(f, theta) + eval(f, theta - h1)) /
          (h1 * h1);
      cplx fd = d2;
      if (n == 3) {
        const cplx d1 = (eval(f, theta + h1) - eval(f, theta - h1)) / (2 * h1);
        fd += d1 / std::tan(theta);
      }
      worst = std::max(worst, std::abs(fd - eval(lf, theta)));
    }
    CHECK(worst < 1e-4 * std::max(1.0, hk_norm(lf, 0)));  // O(h^2) oracle
  }
}

TEST_CASE("hk_norm definition, monotonicity, divergence of partial sums") {
  // k = 0: plain l2 of coefficients
  {
    BoundaryData f = BoundaryData::zeros(3, 2);
    f.at(0) = cplx(3, 0);
    f.at(2) = cplx(0, 4);
    CHECK(hk_norm(f, 0) == doctest::Approx(5.0));
  }
  // single mode: (1 + l(l+n-2))^{k/2}
  for (int n : {2, 3}) {
    BoundaryData f = BoundaryData::zeros(n, 6);
    f.at(5) = 1.0;
    const double eig = angular_eigenvalue(n, 5);
    for (int k : {0, 1, 3})
      CHECK(hk_norm(f, k) == doctest::Approx(std::pow(1.0 + eig, 0.5 * k)));
  }
  // monotone in k
  {
    Rng rng(5);
    const BoundaryData f = random_boundary_data(3, 8, 0, 1.0, rng);
    CHECK(hk_norm(f, 0) <= hk_norm(f, 1));
    CHECK(hk_norm(f, 1) <= hk_norm(f, 2));
  }
  // coefficients l^{-(k+1)}: H^k norms settle, H^{k+1} partial sums keep
  // growing as the band limit increases
  {
    const int k = 1;
    auto partial = [&](int L, int order) {
      BoundaryData f = BoundaryData::zeros(2, L);
      for (int l = 1; l <= L; ++l) {
        f.at(l) = std::pow((double)l, -(k + 1));
        f.at(-l) = f.at(l);
      }
      return hk_norm(f, order);
    };
    const double hk_64 = partial(64, k), hk_256 = partial(256, k);
    const double hk1_64 = partial(64, k + 1), hk1_256 = partial(256, k + 1);
    CHECK(hk_256 - hk_64 < 0.02 * hk_64);        // convergent tail
    CHECK(hk1_256 - hk1_64 > 0.25 * hk1_64);     // divergent growth
  }
}

TEST_CASE("grid and band mismatches are rejected") {
  const AngularGrid small = make_angular_grid(2, 2);
  BoundaryData f = BoundaryData::zeros(2, 6);
  CHECK_THROWS_AS(synth(f, small), MismatchError);
  std::vector<cplx> vals(small.nodes.size() + 1);
  CHECK_THROWS_AS(analyze(vals, small, 2), MismatchError);
  BoundaryData f3 = BoundaryData::zeros(3, 2);
  CHECK_THROWS_AS(synth(f3, small), MismatchError);
  CHECK_THROWS_AS(f3.at(5), MismatchError);
}
