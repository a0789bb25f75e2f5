#include <doctest.h>

#include <cmath>

#include "nlhelm/acceptance.hpp"
#include "nlhelm/expansion.hpp"
#include "nlhelm/quadrature.hpp"

using namespace nlhelm;

namespace {
GridPtr small_grid(std::size_t M = 2048) {
  return make_radial_grid(1.0, 0.02, 0.0, 0.0, M, 4);
}
}  // namespace

TEST_CASE("free_mode closed forms") {
  const GridPtr g = small_grid(512);
  // n=3, l=0: phi = sqrt(2/(pi lambda)) sin(lambda r)/r
  const ModeField m0 = free_mode(3, 0, *g);
  for (std::size_t i = 0; i < g->size(); i += 37) {
    const double r = g->nodes[i];
    const double ref = std::sqrt(2.0 / (kPi * 1.0)) * std::sin(r) / r;
    CHECK(m0.values[i].real() == doctest::Approx(ref).epsilon(1e-12));
  }
  // n=2, l=0 near r=0: J_0 -> 1
  const GridPtr g0 = make_radial_grid(1.0, 1e-4, 4.0, 40.0, 4096, 4);
  const ModeField m2 = free_mode(2, 0, *g0);
  CHECK(std::abs(m2.values[0] - bessel_j(Order{0}, g0->nodes[0])) == 0.0);
  CHECK(m2.values[0].real() == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("free_mode satisfies the radial equation (FD residual)") {
  const GridPtr g = small_grid(2048);
  for (int ell : {0, 1, 4}) {
    const ModeField m = free_mode(3, ell, *g);
    const double eig = angular_eigenvalue(3, ell);
    double worst = 0.0;
    for (std::size_t i = 3; i + 3 < g->size(); i += 29) {
      std::vector<double> pts(g->nodes.begin() + i - 3, g->nodes.begin() + i + 4);
      const auto w1 = fd_weights(g->nodes[i], pts, 1);
      const auto w2 = fd_weights(g->nodes[i], pts, 2);
      cplx d1(0, 0), d2(0, 0);
      for (int j = -3; j <= 3; ++j) {
        d1 += w1[j + 3] * m.values[i + j];
        d2 += w2[j + 3] * m.values[i + j];
      }
      const double r = g->nodes[i];
      const cplx resid = -d2 - 2.0 / r * d1 + eig / (r * r) * m.values[i] -
                         m.values[i];
      worst = std::max(worst, std::abs(resid));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("poisson_apply: zero data, round trip, free multiplier") {
  const GridPtr g = small_grid();
  const ModeTable table(g, 3, 4, nullptr);
  ExtractOptions ext;
  ext.sobolev_k = 2;

  const Field uz = poisson_apply(BoundaryData::zeros(3, 4), table);
  CHECK(field_l2_norm(uz) == 0.0);

  BoundaryData f = BoundaryData::zeros(3, 4);
  f.at(2) = cplx(0.3, -0.7);
  const Field u0 = poisson_apply(f, table);
  const BoundaryData fin = extract_limit(u0, -1, table, ext).leading;
  CHECK(hk_norm(fin - f, 2) <= 1e-8 * hk_norm(f, 2));

  const BoundaryData b0 = extract_limit(u0, +1, table, ext).leading;
  const double nu = 2.5;
  const cplx mult(std::cos(nu * kPi + kPi / 2), -std::sin(nu * kPi + kPi / 2));
  CHECK(std::abs(b0.at(2) / f.at(2) - mult) < 1e-10);
  CHECK(std::abs(std::abs(b0.at(2) / f.at(2)) - 1.0) < 1e-13);
}

TEST_CASE("n=2: Poisson round trip and unit multipliers") {
  const GridPtr g = small_grid();
  const ModeTable table(g, 2, 5, nullptr);
  Rng rng(41);
  const BoundaryData f = random_boundary_data(2, 5, 2, 0.7, rng);
  const Field u0 = poisson_apply(f, table);
  ExtractOptions ext;
  ext.sobolev_k = 2;
  CHECK(hk_norm(extract_limit(u0, -1, table, ext).leading - f, 2) <=
        1e-9 * hk_norm(f, 2));
  const BoundaryData b0 = extract_limit(u0, +1, table, ext).leading;
  for (int ell = -5; ell <= 5; ++ell) {
    const double nu = std::abs(ell);
    const cplx mult(std::cos(nu * kPi + kPi / 2), -std::sin(nu * kPi + kPi / 2));
    CHECK(std::abs(b0.at(ell) - mult * f.at(ell)) < 1e-10);
  }
}

TEST_CASE("split_in_out: exact reconstruction and pure far-field factors") {
  const GridPtr g = small_grid();
  const ModeTable table(g, 3, 3, nullptr);
  Rng rng(3);
  const BoundaryData f = random_boundary_data(3, 3, 2, 1.0, rng);
  const Field u0 = poisson_apply(f, table);
  const SplitField sp = split_in_out(u0, table);

  double scale = 0.0;
  for (const auto& m : u0.modes)
    for (const auto& v : m.values) scale = std::max(scale, std::abs(v));
  CHECK(max_node_error(sp.incoming + sp.outgoing, u0) <= 1e-13 * scale);

  // n=3 l=0 outgoing piece is proportional to e^{i lambda r}/r beyond 2R
  const auto& m0 = sp.outgoing.modes[0];
  cplx ratio0(0, 0);
  bool constant = true;
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double r = g->nodes[i];
    if (r < 2.0 * g->r_match + 1.0) continue;
    const cplx h = cplx(std::cos(r), std::sin(r)) / r;
    const cplx ratio = m0.values[i] / h;
    if (ratio0 == cplx(0, 0)) ratio0 = ratio;
    constant = constant && std::abs(ratio - ratio0) < 1e-9 * std::abs(ratio0);
  }
  CHECK(constant);

  ExtractOptions ext;
  ext.sobolev_k = 2;
  CHECK(hk_norm(extract_limit(sp.outgoing, -1, table, ext).leading, 0) < 1e-9);
  CHECK(hk_norm(extract_limit(sp.incoming, +1, table, ext).leading, 0) < 1e-9);
}

TEST_CASE("resolvent_apply: zero, linearity, conjugation, radiation") {
  const GridPtr g = small_grid();
  const ModeTable table(g, 3, 2, nullptr);
  Rng rng(17);
  const Field F = bump_field(g, 3, 2, rng, 30.0, 90.0, 5.0, 9.0);
  const Field G = bump_field(g, 3, 2, rng, 40.0, 100.0, 5.0, 9.0);

  CHECK(field_l2_norm(resolvent_apply(Field::zeros(3, 2, g), +1, table)) == 0.0);

  const Field u = resolvent_apply(F, +1, table);
  const Field v = resolvent_apply(G, +1, table);
  const Field sum = resolvent_apply(F + G, +1, table);
  CHECK(field_l2_norm(sum - (u + v)) <= 1e-12 * field_l2_norm(sum));

  // R(lambda - i0) F = conj(R(lambda + i0) F) for real-valued F
  Field Freal = F;
  for (auto& m : Freal.modes)
    for (auto& v : m.values) v = cplx(v.real(), 0.0);
  const Field upr = resolvent_apply(Freal, +1, table);
  const Field um = resolvent_apply(Freal, -1, table);
  double worst = 0.0;
  for (std::size_t m = 0; m < upr.modes.size(); ++m)
    for (std::size_t i = 0; i < g->size(); ++i)
      worst = std::max(worst, std::abs(um.modes[m].values[i] -
                                       std::conj(upr.modes[m].values[i])));
  CHECK(worst == 0.0);

  // outgoing radiation condition: u_l / h+_l constant beyond the support
  const auto& d = table.mode(0);
  cplx r0(0, 0);
  double drift = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    if (g->nodes[i] < 120.0) continue;
    const cplx ratio = u.modes[0].values[i] / d.out[i];
    if (r0 == cplx(0, 0)) r0 = ratio;
    drift = std::max(drift, std::abs(ratio - r0) / std::abs(r0));
  }
  CHECK(drift < 1e-6);
}

TEST_CASE("resolvent residual at reference-like resolution") {
  const GridPtr g = small_grid(4096);
  const ModeTable table(g, 3, 2, nullptr);
  Rng rng(23);
  const Field F = bump_field(g, 3, 2, rng, 30.0, 100.0, 5.0, 10.0);
  const Field u = resolvent_apply(F, +1, table);
  CHECK(resolvent_residual(u, F, nullptr) < 1e-6);
}

TEST_CASE("resolvent far-tail precondition") {
  const GridPtr g = small_grid(1024);
  const ModeTable table(g, 3, 1, nullptr);
  Rng rng(29);
  // bump sitting at 0.95 r_max: essentially all mass beyond 0.8 r_max
  Field F = bump_field(g, 3, 1, rng, 0.95 * g->r_max, 0.95 * g->r_max, 4.0, 4.0);
  CHECK(far_tail_fraction(F) > 0.2);
  CHECK_THROWS_AS(resolvent_apply(F, +1, table), PreconditionError);
  CHECK_THROWS_AS(resolvent_apply(F, 0, table), std::domain_error);
}

TEST_CASE("potential_mode: V = 0 limit reproduces the free solutions") {
  const GridPtr g = small_grid(1024);
  const RadialPotential V0 = powerlaw_potential(0.0, 1.5);
  const PotentialMode pm = potential_mode(1, V0, g, 3);
  const ModeField free1 = free_mode(3, 1, *g);
  double worst = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i)
    worst = std::max(worst, std::abs(pm.regular.values[i] - free1.values[i]));
  CHECK(worst < 1e-9);
  // free Wronskian 2i/pi
  CHECK(std::abs(pm.wronskian - cplx(0.0, 2.0 / kPi)) < 1e-9);
  CHECK(pm.wronskian_drift < 1e-8);
  // outgoing matches h+ everywhere
  double worst_out = 0.0;
  for (std::size_t i = 0; i < g->size(); i += 13) {
    const double r = g->nodes[i];
    const cplx ref = std::pow(r, -0.5) * hankel(1, Order{3}, r);
    worst_out = std::max(worst_out, std::abs(pm.outgoing.values[i] - ref));
  }
  CHECK(worst_out < 1e-8);
}

TEST_CASE("potential_mode: inverse-square potential shifts the order") {
  // V = 2/r^2 with nu = 1/2 gives nu' = sqrt(1/4 + 2) = 3/2 exactly
  const GridPtr g = small_grid(1024);
  const RadialPotential V = inverse_square_potential(2.0);
  const PotentialMode pm = potential_mode(0, V, g, 3);

  auto deviation = [&](int two_nu_ref) {
    // constancy of u_out / (r^{-1/2} H^(1)_{ref}) over a mid window
    cplx r0(0, 0);
    double dev = 0.0;
    for (std::size_t i = 0; i < g->size(); i += 7) {
      const double r = g->nodes[i];
      if (r < 15.0 || r > 40.0) continue;
      const cplx ref = std::pow(r, -0.5) * hankel(1, Order{two_nu_ref}, r);
      const cplx ratio = pm.outgoing.values[i] / ref;
      if (r0 == cplx(0, 0)) r0 = ratio;
      dev = std::max(dev, std::abs(ratio - r0) / std::abs(r0));
    }
    return dev;
  };
  const double dev_shifted = deviation(3);   // H_{3/2}
  const double dev_unshifted = deviation(1); // H_{1/2}
  // r_max-matching against the free order leaves an O(c/(2 lambda r_max))
  // admixture; the shifted order must still win decisively
  CHECK(dev_shifted < 0.05);
  CHECK(dev_shifted < 0.2 * dev_unshifted);

  // regular solution proportional to r^{-1/2} J_{3/2}
  cplx c0(0, 0);
  double worst = 0.0;
  for (std::size_t i = 0; i < g->size(); i += 13) {
    const double r = g->nodes[i];
    if (r < 5.0 || r > 40.0) continue;
    const cplx ref = std::pow(r, -0.5) * bessel_j(Order{3}, r);
    if (std::abs(ref) < 0.05) continue;  // skip near zeros of the reference
    const cplx ratio = pm.regular.values[i] / ref;
    if (c0 == cplx(0, 0)) c0 = ratio;
    worst = std::max(worst, std::abs(ratio - c0) / std::abs(c0));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("potential table: Wronskian drift and Poisson round trip") {
  const GridPtr g = small_grid(2048);
  const RadialPotential V = exp_potential(3.0, 1.0);
  const ModeTable table(g, 3, 3, &V);
  for (int ell = 0; ell <= 3; ++ell)
    CHECK(table.mode(ell).wronskian_drift < 1e-8);

  Rng rng(31);
  const BoundaryData f = random_boundary_data(3, 3, 2, 0.5, rng);
  const Field u0 = poisson_apply(f, table);
  ExtractOptions ext;
  ext.sobolev_k = 2;
  CHECK(hk_norm(extract_limit(u0, -1, table, ext).leading - f, 2) <=
        1e-8 * hk_norm(f, 2));

  // spectral-measure identity with the potential
  const Field F = bump_field(g, 3, 3, rng, 30.0, 80.0, 5.0, 9.0, true);
  const Field up = resolvent_apply(F, +1, table);
  const Field um = resolvent_apply(F, -1, table);
  const Field lhs = cplx(0.0, -2.0) * (up - um);
  const Field rhs = poisson_apply(poisson_adjoint(F, table), table);
  CHECK(field_l2_norm(lhs - rhs) <= 1e-6 * field_l2_norm(lhs));

  // radiation condition with a potential: constant ratio against the
  // potential outgoing profile beyond the support of F
  const auto& d = table.mode(1);
  cplx r0(0, 0);
  double drift = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    if (g->nodes[i] < 110.0) continue;
    const cplx ratio = up.modes[1].values[i] / d.out[i];
    if (r0 == cplx(0, 0)) r0 = ratio;
    drift = std::max(drift, std::abs(ratio - r0) / std::abs(r0));
  }
  CHECK(drift < 1e-6);
}

TEST_CASE("a corrupted Green constant is caught by the residual oracle") {
  // the selfcheck mutation hook: a 1% kappa error must blow the residual
  const GridPtr g = small_grid(2048);
  ModeTable table(g, 3, 1, nullptr);
  Rng rng(37);
  const Field F = bump_field(g, 3, 1, rng, 30.0, 80.0, 5.0, 9.0);
  const Field ok = resolvent_apply(F, +1, table);
  CHECK(resolvent_residual(ok, F, nullptr) < 1e-5);
  table.debug_scale_kappa(1.01);
  const Field badu = resolvent_apply(F, +1, table);
  CHECK(resolvent_residual(badu, F, nullptr) > 1e-3);
}

TEST_CASE("shape mismatches are rejected") {
  const GridPtr g = small_grid(512);
  const GridPtr g2 = small_grid(256);
  const ModeTable table(g, 3, 2, nullptr);
  BoundaryData f = BoundaryData::zeros(3, 5);
  CHECK_THROWS_AS(poisson_apply(f, table), MismatchError);
  Field F = Field::zeros(3, 2, g2);
  CHECK_THROWS_AS(resolvent_apply(F, +1, table), MismatchError);
}
