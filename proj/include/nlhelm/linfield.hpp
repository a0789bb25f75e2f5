// Per-mode radial solutions, the Poisson operator P(+-lambda), the exact
// incoming/outgoing Hankel splitting, and the limiting-absorption resolvents
// R(lambda +- i0), with or without a radial short-range potential.
//
// Conventions (n = 2 or 3, nu = ell + (n-2)/2):
//   regular profile   phi_l(r) = r^{-(n-2)/2} J_nu(lambda r)
//   outgoing profile  h+_l(r)  = r^{-(n-2)/2} H^(1)_nu(lambda r)
//                     h+_l(r) -> r^{-(n-1)/2} e^{+i lambda r} amp+,
//                     amp+ = sqrt(2/(pi lambda)) e^{-i(nu pi/2 + pi/4)}
//   incoming profile  h-_l = conj(h+_l)  (real potentials only)
// Outgoing Green kernel per mode:
//   G+(r,r') = kappa * u_reg(r_<) u_out(r_>),  kappa = -1/W,
//   W = r^{n-1} (u_reg u_out' - u_reg' u_out)  (constant in r; 2i/pi free)
// Fields written u ~ r^{-(n-1)/2}( e^{-i lambda r} f + e^{+i lambda r} b ).
#pragma once

#include <optional>

#include "nlhelm/angular.hpp"
#include "nlhelm/radial.hpp"

namespace nlhelm {

// Cached per-mode radial data on one grid: profiles at the panel nodes,
// panel-interior quadrature tables for the Green integrals, Wronskians and
// matching coefficients.  Pure once built; safe to share across calls.
class ModeTable {
 public:
  ModeTable(GridPtr grid, int dim_n, int max_mode,
            const RadialPotential* potential = nullptr);

  const RadialGrid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }
  int dim_n() const { return dim_n_; }
  int max_mode() const { return max_mode_; }
  bool has_potential() const { return has_potential_; }

  // Quadrature against the Green kernels runs through one degree-(2q-1)
  // interpolant per panel (the panel's q nodes plus q/2 neighbours each
  // side), for both full-panel sums and the partial pieces split at the
  // kernel diagonal; the two therefore agree identically at panel edges.
  struct ModeData {
    int ell = 0;
    Order nu{};
    std::vector<double> reg;        // u_reg at nodes (real: real V, J-type init)
    std::vector<double> reg_prime;
    std::vector<cplx> out;          // u_out at nodes
    std::vector<cplx> out_prime;
    std::vector<double> panel_reg;  // [panel*S + j] kernel-weighted full-panel
    std::vector<cplx> panel_out;
    std::vector<double> c_reg;      // [node*S + j]: partial-panel tables
    std::vector<cplx> c_out;
    cplx wronskian{};               // W above
    double wronskian_drift = 0.0;   // max relative drift over check radii
    cplx kappa{};                   // -1/W
    cplx amp_out{};                 // far amplitude of u_out
    cplx a_in{};                    // coefficient of h- in u_reg (1/2 free)
  };

  int stencil_size() const { return stencil_; }
  std::size_t stencil_base(std::size_t panel) const { return sbase_[panel]; }

  const ModeData& mode(int ell) const;
  std::size_t mode_count() const { return modes_.size(); }
  const ModeData& mode_by_index(std::size_t i) const { return modes_[i]; }

  // test hook: scales every Green constant (used by the selfcheck
  // mutation example); never called by library code
  void debug_scale_kappa(double s);

 private:
  GridPtr grid_;
  int dim_n_;
  int max_mode_;
  bool has_potential_;
  int stencil_ = 0;
  std::vector<std::size_t> sbase_;  // first node index of each panel stencil
  std::vector<ModeData> modes_;
};

// phi_l on the grid (free regular solution of the mode-l radial equation)
ModeField free_mode(int dim_n, int ell, const RadialGrid& grid);

// u0 with (H - lambda^2) u0 = 0 and incoming data f.  Per mode
// u0_l = c_l u_reg with c_l = f_l / (a_in amp-); free case
// c_l = sqrt(2 pi lambda) e^{-i(nu pi/2+pi/4)} f_l.  Raises NumericalError
// when a matching coefficient is resonantly small.
Field poisson_apply(const BoundaryData& f, const ModeTable& table);

// Exact Hankel splitting J = (H^(1)+H^(2))/2 with the radial cutoff:
// outgoing = chi(r) c_l/2 h+; incoming = u0 - outgoing (carries the whole
// near field).  Requires a free-case Poisson field.
struct SplitField {
  Field incoming;   // u_-
  Field outgoing;   // u_+
};
SplitField split_in_out(const Field& u0, const ModeTable& table);

// R(lambda + i0) (sign=+1) or R(lambda - i0) (sign=-1) applied to F.
// Checks the far-tail mass precondition on F.
Field resolvent_apply(const Field& F, int sign, const ModeTable& table);

// Per-mode potential solutions: regular (J-type data at r_min), outgoing
// (matched to h+ at r_max), and their Wronskian.
struct PotentialMode {
  ModeField regular;
  ModeField outgoing;
  cplx wronskian;
  double wronskian_drift;
};
PotentialMode potential_mode(int ell, const RadialPotential& potential,
                             GridPtr grid, int dim_n);

// P(lambda)^* F per mode: conj(c^P_l) int u_reg F_l r^{n-1} dr where
// c^P_l is the Poisson normaliser of a unit mode.
BoundaryData poisson_adjoint(const Field& F, const ModeTable& table);

// weighted-norm relative tail mass of F beyond fraction*r_max
double far_tail_fraction(const Field& F, double fraction = 0.8);

}  // namespace nlhelm
