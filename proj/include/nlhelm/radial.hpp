// Radial grids (composite Gauss-Legendre panels), per-mode radial fields,
// and radial short-range potentials.
#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "nlhelm/specfun.hpp"
#include "nlhelm/types.hpp"

namespace nlhelm {

struct RadialGrid {
  double r_min = 0.0;
  double r_match = 0.0;  // start of the asymptotic/matching region (R)
  double r_max = 0.0;
  double lambda = 0.0;   // spectral parameter
  int panel_order = 4;   // Gauss nodes per panel (exact to degree 2q-1)
  std::vector<double> nodes;    // all panel nodes, ascending
  std::vector<double> weights;  // quadrature weights in dr
  std::vector<double> edges;    // panel boundaries, size = npanels+1

  std::size_t size() const { return nodes.size(); }
  std::size_t npanels() const { return edges.size() - 1; }
  std::size_t panel_of(std::size_t node) const { return node / panel_order; }
};

using GridPtr = std::shared_ptr<const RadialGrid>;

// Uniform panels over [r_min, r_max]; node_count is rounded up to a
// multiple of panel_order.  Defaults (r_match = 0, r_max = 0) resolve to
// r_match = 4 pi / lambda and r_max = 16 r_match.
GridPtr make_radial_grid(double lambda, double r_min, double r_match,
                         double r_max, std::size_t node_count,
                         int panel_order = 4);

struct ModeField {
  int ell = 0;
  Order nu{};
  std::vector<cplx> values;  // one per grid node
};

struct Field {
  int dim_n = 3;
  int max_mode = 0;
  GridPtr grid;
  std::vector<ModeField> modes;  // storage order matches BoundaryData

  static Field zeros(int dim_n, int max_mode, GridPtr grid);
  ModeField& mode(int ell);
  const ModeField& mode(int ell) const;
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(cplx s, const Field& a);

// max over nodes and modes of |a - b|
double max_node_error(const Field& a, const Field& b);

// sqrt( sum_l int |v_l(r)|^2 r^{n-1} dr ) by the grid quadrature
double field_l2_norm(const Field& v);

// Radial short-range potential |V(r)| <= C r^-gamma, gamma > 1.
struct RadialPotential {
  std::function<double(double)> eval;
  double gamma = 0.0;
  double bound_C = 0.0;

  double operator()(double r) const { return eval(r); }
};

RadialPotential exp_potential(double amplitude, double rate);
RadialPotential powerlaw_potential(double amplitude, double gamma);
// c / r^2 : exactly solvable by the order shift nu' = sqrt(nu^2 + c)
RadialPotential inverse_square_potential(double c);

// Sample |V| r^gamma over the grid; throws PreconditionError when the
// conormal bound fails or gamma <= 1.
void check_potential(const RadialPotential& V, const RadialGrid& grid);

// Smooth transition: 0 for r <= r_match, 1 for r >= 2 r_match.
double radial_cutoff(double r, double r_match);

}  // namespace nlhelm
