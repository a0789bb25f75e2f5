#include "nlhelm/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlhelm/quadrature.hpp"

namespace nlhelm {

Nonlinearity Nonlinearity::gauge(int p, cplx c) {
  Nonlinearity N;
  N.p = p;
  N.monomials.push_back(Monomial{c, (p + 1) / 2, (p - 1) / 2});
  N.validate();
  return N;
}

Nonlinearity Nonlinearity::none() {
  Nonlinearity N;
  N.p = 3;
  return N;
}

int Nonlinearity::max_degree() const {
  int d = 0;
  for (const auto& m : monomials) d = std::max(d, m.a + m.b);
  return d;
}

bool Nonlinearity::admissible_strict(int dim_n) const {
  return (p - 1) * (dim_n - 1) > 4;
}

bool Nonlinearity::admissible_pn(int dim_n) const {
  return 0.5 * (p - 1) * (dim_n - 1) > 2.0;
}

bool Nonlinearity::gauge_real() const {
  for (const auto& m : monomials)
    if (m.a != m.b + 1 || m.coeff.imag() != 0.0) return false;
  return true;
}

void Nonlinearity::validate() const {
  if (p % 2 == 0) throw PreconditionError("nonlinearity: p must be odd");
  for (const auto& m : monomials) {
    if (m.a < 0 || m.b < 0)
      throw PreconditionError("nonlinearity: negative powers");
    if (m.a + m.b < p)
      throw PreconditionError("nonlinearity: monomial degree below p");
  }
}

namespace {

cplx ipow(cplx z, int n) {
  cplx r(1.0, 0.0);
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

}  // namespace

Field evaluate_N(const Field& u, const Nonlinearity& N, double dealias_factor) {
  Field out = Field::zeros(u.dim_n, u.max_mode, u.grid);
  if (N.linear()) return out;
  N.validate();

  const int L = u.max_mode;
  double factor = dealias_factor;
  if (factor <= 0.0) factor = 0.5 * (N.max_degree() + 1);
  const std::size_t q =
      static_cast<std::size_t>(std::ceil(factor * (2.0 * L + 2.0)));
  const AngularGrid agrid = make_angular_grid(u.dim_n, L, q);
  const std::size_t Q = agrid.nodes.size();
  const std::size_t nmodes = u.modes.size();

  // basis table: B[node * nmodes + m]
  std::vector<cplx> B(Q * nmodes);
  const auto ells = mode_list(u.dim_n, L);
  for (std::size_t j = 0; j < Q; ++j)
    for (std::size_t m = 0; m < nmodes; ++m)
      B[j * nmodes + m] = basis_value(agrid, ells[m], j);

  const std::size_t M = u.grid->size();
  std::vector<cplx> vals(Q), nl(Q);
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = 0; j < Q; ++j) {
      cplx acc(0, 0);
      for (std::size_t m = 0; m < nmodes; ++m)
        acc += u.modes[m].values[i] * B[j * nmodes + m];
      if (std::abs(acc) > 1e6)
        throw NumericalError(
            "evaluate_N: overflow-scale field value (outside contraction regime)");
      vals[j] = acc;
    }
    for (std::size_t j = 0; j < Q; ++j) {
      cplx acc(0, 0);
      for (const auto& mon : N.monomials)
        acc += mon.coeff * ipow(vals[j], mon.a) * ipow(std::conj(vals[j]), mon.b);
      nl[j] = acc;
    }
    // analyze back, truncating to the band limit
    for (std::size_t m = 0; m < nmodes; ++m) {
      cplx acc(0, 0);
      for (std::size_t j = 0; j < Q; ++j)
        acc += agrid.weights[j] * nl[j] * std::conj(B[j * nmodes + m]);
      out.modes[m].values[i] = acc;
    }
  }
  return out;
}

double weighted_norm(const Field& v, double delta) {
  if (!(delta > 0.0)) throw std::domain_error("weighted_norm: delta must be > 0");
  const RadialGrid& g = *v.grid;
  const double nm1 = v.dim_n - 1.0;
  long double s = 0.0L;
  for (const auto& m : v.modes)
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g.nodes[i];
      const double w =
          g.weights[i] * std::pow(1.0 + r * r, -0.5 - delta) * std::pow(r, nm1);
      s += (long double)(w * std::norm(m.values[i]));
    }
  return std::sqrt((double)s);
}

GridPtr make_solver_grid(const SolverConfig& cfg) {
  return make_radial_grid(cfg.lambda, cfg.r_min, cfg.r_match, cfg.r_max,
                          cfg.grid_nodes, cfg.panel_order);
}

namespace {

// crude upper estimate for the outgoing-data error from truncating the
// forcing integral at r_max: F ~ C r^{-p(n-1)/2} beyond the grid
double tail_bound_estimate(const Field& F, int p) {
  const RadialGrid& g = *F.grid;
  const int n = F.dim_n;
  const double s = 0.5 * p * (n - 1.0) - 0.5 * (n + 1.0);
  if (s <= 0.0) return std::numeric_limits<double>::infinity();
  double cmeas = 0.0;
  const std::size_t M = g.size();
  for (std::size_t i = (std::size_t)(0.9 * M); i < M; ++i) {
    long double a2 = 0.0L;
    for (const auto& m : F.modes) a2 += std::norm(m.values[i]);
    cmeas = std::max(cmeas, std::sqrt((double)a2) *
                                std::pow(g.nodes[i], 0.5 * p * (n - 1.0)));
  }
  const double kap = 0.5 * kPi * std::sqrt(2.0 / (kPi * g.lambda));
  return kap * cmeas * std::pow(g.r_max, -s) / s;
}

}  // namespace

SolveResult picard_solve(const BoundaryData& f, const Nonlinearity& N,
                         const SolverConfig& cfg, const ModeTable* table_in) {
  N.validate();
  const double fnorm = hk_norm(f, cfg.sobolev_k);
  if (fnorm > cfg.max_data_norm)
    throw PreconditionError("picard_solve: data norm exceeds max_data_norm");

  std::optional<ModeTable> own_table;
  if (!table_in) {
    own_table.emplace(make_solver_grid(cfg), cfg.dim_n, cfg.max_mode,
                      cfg.potential ? &*cfg.potential : nullptr);
    table_in = &*own_table;
  }
  const ModeTable& table = *table_in;
  ExtractOptions ext = cfg.extract;
  ext.sobolev_k = cfg.sobolev_k;

  SolveResult res;
  res.admissible_strict = N.linear() || N.admissible_strict(cfg.dim_n);
  res.admissible_pn = N.linear() || N.admissible_pn(cfg.dim_n);
  if (!res.admissible_strict)
    res.warnings.push_back("admissibility (p-1)(n-1) > 4 fails; proceeding");
  if (!res.admissible_pn)
    res.warnings.push_back("admissibility (p-1)(n-1)/2 > 2 fails; proceeding");
  const Field u0 = poisson_apply(f, table);
  const SplitField split = split_in_out(u0, table);
  const Field& um = split.incoming;
  const Field& up = split.outgoing;

  Field w = up;
  Field last_forcing = Field::zeros(cfg.dim_n, cfg.max_mode, table.grid_ptr());
  res.status = "max_iter";
  int grew = 0;
  for (int m = 0; m < cfg.max_iter; ++m) {
    const Field forcing = evaluate_N(um + w, N, cfg.dealias_factor);
    Field wn = up + resolvent_apply(forcing, +1, table);
    const double un = weighted_norm(wn - w, cfg.delta);
    res.update_norms.push_back(un);
    w = std::move(wn);
    last_forcing = forcing;
    res.iterates = m + 1;
    if (un < cfg.tol) {
      res.converged = true;
      res.status = "converged";
      break;
    }
    const std::size_t c = res.update_norms.size();
    if (c >= 2 && res.update_norms[c - 1] > res.update_norms[c - 2]) {
      if (++grew >= 2) {
        res.status = "diverged at update norm " +
                     std::to_string(res.update_norms[c - 1]);
        break;
      }
    } else {
      grew = 0;
    }
  }
  for (std::size_t m = 0; m + 1 < res.update_norms.size(); ++m)
    res.contraction_factors.push_back(res.update_norms[m + 1] /
                                      res.update_norms[m]);

  res.u = um + w;
  res.w = w;
  res.b0 = extract_limit(u0, +1, table, ext).leading;
  res.b1 = extract_limit(w - up, +1, table, ext).leading;
  res.b_total = res.b0 + res.b1;
  res.outgoing_fit = extract_limit(res.u, +1, table, ext);
  res.remainder_exponent = res.outgoing_fit.remainder_exponent;
  res.exponent_valid = res.outgoing_fit.exponent_valid;

  const double f2 = hk_norm(f, 0) * hk_norm(f, 0);
  const double b2 = hk_norm(res.b_total, 0) * hk_norm(res.b_total, 0);
  res.flux_difference = std::abs(b2 - f2);
  res.flux_defect = (f2 > 0.0) ? res.flux_difference / f2 : 0.0;
  res.forcing_tail_bound = N.linear() ? 0.0 : tail_bound_estimate(last_forcing, N.p);
  res.pde_residual = pde_residual(res.u, N,
                                  cfg.potential ? &*cfg.potential : nullptr,
                                  cfg.delta, cfg.dealias_factor);
  return res;
}

std::pair<BoundaryData, ScatteringReport> scattering_map(
    const BoundaryData& f, const Nonlinearity& N, const SolverConfig& cfg,
    const ModeTable* table, SolveResult* full) {
  SolveResult res = picard_solve(f, N, cfg, table);
  ScatteringReport rep;
  rep.hk_f = hk_norm(f, cfg.sobolev_k);
  rep.hk_b = hk_norm(res.b_total, cfg.sobolev_k);
  rep.flux_defect = res.flux_defect;
  rep.remainder_exponent = res.remainder_exponent;
  rep.exponent_valid = res.exponent_valid;
  rep.iterates = res.iterates;
  rep.converged = res.converged;
  rep.pde_residual = res.pde_residual;
  BoundaryData b = res.b_total;
  if (full) *full = std::move(res);
  return {b, rep};
}

double threshold_search(const BoundaryData& direction, const Nonlinearity& N,
                        const SolverConfig& cfg, double t_lo, double t_hi) {
  if (!(0.0 < t_lo && t_lo < t_hi))
    throw std::domain_error("threshold_search: need 0 < t_lo < t_hi");
  BoundaryData dir = direction;
  const double dn = hk_norm(dir, cfg.sobolev_k);
  if (dn == 0.0) throw PreconditionError("threshold_search: zero direction");
  dir = cplx(1.0 / dn, 0.0) * dir;

  SolverConfig probe = cfg;
  probe.max_data_norm = std::numeric_limits<double>::infinity();
  const ModeTable table(make_solver_grid(probe), probe.dim_n, probe.max_mode,
                        probe.potential ? &*probe.potential : nullptr);
  auto converges = [&](double t) {
    try {
      return picard_solve(cplx(t, 0.0) * dir, N, probe, &table).converged;
    } catch (const NumericalError&) {
      return false;
    }
  };

  if (!converges(t_lo))
    throw PreconditionError("threshold_search: t_lo already divergent");
  if (converges(t_hi)) return t_hi;
  double lo = t_lo, hi = t_hi;
  while (hi - lo > 0.05 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (converges(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double pde_residual(const Field& u, const Nonlinearity& N,
                    const RadialPotential* potential, double delta,
                    double dealias_factor) {
  const RadialGrid& g = *u.grid;
  const std::size_t M = g.size();
  const int n = u.dim_n;
  const double lam2 = g.lambda * g.lambda;
  const int sw = 3;  // 7-point stencils
  if (M < 8) throw PreconditionError("pde_residual: grid too small");

  const Field nl = evaluate_N(u, N, dealias_factor);

  // stencil weights per interior node
  std::vector<std::vector<double>> w1(M), w2(M);
  for (std::size_t i = sw; i + sw < M; ++i) {
    std::vector<double> pts(g.nodes.begin() + i - sw, g.nodes.begin() + i + sw + 1);
    w1[i] = fd_weights(g.nodes[i], pts, 1);
    w2[i] = fd_weights(g.nodes[i], pts, 2);
  }

  long double num = 0.0L, den_u = 0.0L, den_nl = 0.0L;
  for (std::size_t m = 0; m < u.modes.size(); ++m) {
    const double eig = angular_eigenvalue(n, u.modes[m].ell);
    for (std::size_t i = sw; i + sw < M; ++i) {
      const double r = g.nodes[i];
      cplx d1(0, 0), d2(0, 0);
      for (int j = -sw; j <= sw; ++j) {
        d1 += w1[i][j + sw] * u.modes[m].values[i + j];
        d2 += w2[i][j + sw] * u.modes[m].values[i + j];
      }
      const cplx val = u.modes[m].values[i];
      const cplx lhs = -d2 - (n - 1.0) / r * d1 + eig / (r * r) * val +
                       (potential ? (*potential)(r) : 0.0) * val - lam2 * val;
      const cplx resid = lhs - nl.modes[m].values[i];
      const double wt = g.weights[i] * std::pow(1.0 + r * r, -0.5 - delta) *
                        std::pow(r, n - 1.0);
      num += wt * std::norm(resid);
      den_u += wt * std::norm(lam2 * val);
      den_nl += wt * std::norm(nl.modes[m].values[i]);
    }
  }
  const double den = std::sqrt((double)den_u) + std::sqrt((double)den_nl);
  if (den == 0.0) return 0.0;
  return std::sqrt((double)num) / den;
}

double flux_check(const BoundaryData& f, const BoundaryData& b,
                  const Nonlinearity& N) {
  if (!N.gauge_real())
    throw PreconditionError(
        "flux_check: nonlinearity is not gauge-invariant with real "
        "coefficients; the flux identity is not expected to hold");
  const double f2 = hk_norm(f, 0) * hk_norm(f, 0);
  if (f2 == 0.0) throw PreconditionError("flux_check: zero incoming data");
  const double b2 = hk_norm(b, 0) * hk_norm(b, 0);
  return std::abs(b2 - f2) / f2;
}

BoundaryData born_term(const BoundaryData& f, const Nonlinearity& N,
                       const SolverConfig& cfg, const ModeTable* table_in) {
  std::optional<ModeTable> own;
  if (!table_in) {
    own.emplace(make_solver_grid(cfg), cfg.dim_n, cfg.max_mode,
                cfg.potential ? &*cfg.potential : nullptr);
    table_in = &*own;
  }
  ExtractOptions ext = cfg.extract;
  ext.sobolev_k = cfg.sobolev_k;
  const Field u0 = poisson_apply(f, *table_in);
  const Field forcing = evaluate_N(u0, N, cfg.dealias_factor);
  const Field w1 = resolvent_apply(forcing, +1, *table_in);
  return extract_limit(w1, +1, *table_in, ext).leading;
}

}  // namespace nlhelm
