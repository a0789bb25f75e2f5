#include "nlhelm/radial.hpp"

#include <algorithm>
#include <cmath>

#include "nlhelm/angular.hpp"
#include "nlhelm/quadrature.hpp"

namespace nlhelm {

GridPtr make_radial_grid(double lambda, double r_min, double r_match,
                         double r_max, std::size_t node_count,
                         int panel_order) {
  if (!(lambda > 0.0)) throw std::domain_error("grid: lambda must be positive");
  if (r_match <= 0.0) r_match = 4.0 * kPi / lambda;
  if (r_max <= 0.0) r_max = 16.0 * r_match;
  if (!(0.0 < r_min && r_min < r_match && r_match < r_max))
    throw std::domain_error("grid: need 0 < r_min < r_match < r_max");
  if (panel_order < 2) throw std::domain_error("grid: panel_order >= 2");

  auto grid = std::make_shared<RadialGrid>();
  grid->r_min = r_min;
  grid->r_match = r_match;
  grid->r_max = r_max;
  grid->lambda = lambda;
  grid->panel_order = panel_order;

  const std::size_t npanels =
      std::max<std::size_t>(1, (node_count + panel_order - 1) / panel_order);
  const GaussRule rule = gauss_legendre(panel_order);
  grid->edges.resize(npanels + 1);
  const double h = (r_max - r_min) / static_cast<double>(npanels);
  for (std::size_t p = 0; p <= npanels; ++p)
    grid->edges[p] = r_min + h * static_cast<double>(p);
  grid->edges.back() = r_max;

  grid->nodes.reserve(npanels * panel_order);
  grid->weights.reserve(npanels * panel_order);
  for (std::size_t p = 0; p < npanels; ++p) {
    const double a = grid->edges[p], b = grid->edges[p + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < panel_order; ++i) {
      grid->nodes.push_back(mid + half * rule.nodes[i]);
      grid->weights.push_back(half * rule.weights[i]);
    }
  }
  return grid;
}

Field Field::zeros(int dim_n, int max_mode, GridPtr grid) {
  Field f;
  f.dim_n = dim_n;
  f.max_mode = max_mode;
  f.grid = std::move(grid);
  for (int ell : mode_list(dim_n, max_mode)) {
    ModeField m;
    m.ell = ell;
    m.nu = order_for_mode(dim_n, ell);
    m.values.assign(f.grid->size(), cplx(0.0, 0.0));
    f.modes.push_back(std::move(m));
  }
  return f;
}

ModeField& Field::mode(int ell) {
  BoundaryData probe;  // reuse the index convention
  probe.dim_n = dim_n;
  probe.max_mode = max_mode;
  return modes[probe.index_of(ell)];
}

const ModeField& Field::mode(int ell) const {
  return const_cast<Field*>(this)->mode(ell);
}

namespace {
Field combine(const Field& a, const Field& b, double sb) {
  if (a.dim_n != b.dim_n || a.max_mode != b.max_mode || a.grid != b.grid)
    throw MismatchError("Field: shape or grid mismatch in arithmetic");
  Field out = a;
  for (std::size_t m = 0; m < out.modes.size(); ++m)
    for (std::size_t i = 0; i < out.modes[m].values.size(); ++i)
      out.modes[m].values[i] += sb * b.modes[m].values[i];
  return out;
}
}  // namespace

Field operator+(const Field& a, const Field& b) { return combine(a, b, 1.0); }
Field operator-(const Field& a, const Field& b) { return combine(a, b, -1.0); }
Field operator*(cplx s, const Field& a) {
  Field out = a;
  for (auto& m : out.modes)
    for (auto& v : m.values) v *= s;
  return out;
}

double max_node_error(const Field& a, const Field& b) {
  if (a.modes.size() != b.modes.size())
    throw MismatchError("max_node_error: shape mismatch");
  double e = 0.0;
  for (std::size_t m = 0; m < a.modes.size(); ++m)
    for (std::size_t i = 0; i < a.modes[m].values.size(); ++i)
      e = std::max(e, std::abs(a.modes[m].values[i] - b.modes[m].values[i]));
  return e;
}

double field_l2_norm(const Field& v) {
  const RadialGrid& g = *v.grid;
  const double nm1 = v.dim_n - 1.0;
  long double s = 0.0L;
  for (const auto& m : v.modes)
    for (std::size_t i = 0; i < g.size(); ++i)
      s += (long double)(g.weights[i] * std::pow(g.nodes[i], nm1) *
                         std::norm(m.values[i]));
  return std::sqrt((double)s);
}

RadialPotential exp_potential(double amplitude, double rate) {
  RadialPotential V;
  V.eval = [amplitude, rate](double r) { return amplitude * std::exp(-rate * r); };
  V.gamma = 8.0;  // decays faster than any fixed power on the grid
  V.bound_C = std::abs(amplitude) * 1e4;
  return V;
}

RadialPotential powerlaw_potential(double amplitude, double gamma) {
  RadialPotential V;
  V.eval = [amplitude, gamma](double r) {
    return amplitude * std::pow(1.0 + r, -gamma);
  };
  V.gamma = gamma;
  V.bound_C = std::abs(amplitude);
  return V;
}

RadialPotential inverse_square_potential(double c) {
  RadialPotential V;
  V.eval = [c](double r) { return c / (r * r); };
  V.gamma = 2.0;
  V.bound_C = std::abs(c);
  return V;
}

void check_potential(const RadialPotential& V, const RadialGrid& grid) {
  if (!(V.gamma > 1.0))
    throw PreconditionError("potential: decay rate gamma must exceed 1");
  for (std::size_t i = 0; i < grid.size(); i += 7) {
    const double r = grid.nodes[i];
    if (std::abs(V(r)) > V.bound_C * std::pow(r, -V.gamma) * (1.0 + 1e-12))
      throw PreconditionError("potential: conormal bound |V| <= C r^-gamma fails");
  }
}

double radial_cutoff(double r, double r_match) {
  const double t = (r - r_match) / r_match;  // 0 at R, 1 at 2R
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

}  // namespace nlhelm
