// Admissible polynomial nonlinearities, the Picard/contraction iteration
// for nonlinear Helmholtz eigenfunctions, and the scattering map f -> b.
//
// Iteration: u0 = P(lambda) f, u0 = u_- + u_+ (Hankel splitting),
// w_0 = u_+, w_{m+1} = u_+ + R(lambda+i0) N[u_- + w_m]; u = u_- + w;
// b = b0 + b1 with b0 the outgoing data of u0 and b1 that of w - u_+.
#pragma once

#include <optional>
#include <string>

#include "nlhelm/expansion.hpp"

namespace nlhelm {

struct Monomial {
  cplx coeff{};
  int a = 0;  // powers of u
  int b = 0;  // powers of conj(u)
};

struct Nonlinearity {
  std::vector<Monomial> monomials;
  int p = 3;  // odd minimal degree

  // c |u|^{p-1} u  (a = (p+1)/2, b = (p-1)/2)
  static Nonlinearity gauge(int p, cplx c);
  static Nonlinearity none();

  bool linear() const { return monomials.empty(); }
  int max_degree() const;
  bool admissible_strict(int dim_n) const;  // (p-1)(n-1) > 4
  bool admissible_pn(int dim_n) const;      // (p-1)(n-1)/2 > 2
  // every monomial of gauge form |u|^{2q} u with real coefficient
  bool gauge_real() const;
  void validate() const;  // p odd, all degrees >= p
};

// Pointwise product nonlinearity on a dealiased angular grid, truncated
// back to the band limit.  dealias_factor <= 0 selects (p_max+1)/2.
Field evaluate_N(const Field& u, const Nonlinearity& N, double dealias_factor);

// ( sum_l int <r>^{-1-2 delta} |v_l|^2 r^{n-1} dr )^{1/2}
double weighted_norm(const Field& v, double delta);

struct SolverConfig {
  int dim_n = 3;
  double lambda = 1.0;
  int max_mode = 16;
  int sobolev_k = 2;
  double r_min = 0.02;
  double r_match = 0.0;  // 0 -> 4 pi / lambda
  double r_max = 0.0;    // 0 -> 16 r_match
  std::size_t grid_nodes = 4096;
  int panel_order = 4;
  double tol = 1e-10;
  double delta = 0.05;
  int max_iter = 25;
  double dealias_factor = 0.0;  // 0 -> (p_max+1)/2
  double max_data_norm = 1.0;
  double accept_residual = 1e-5;
  ExtractOptions extract{};
  std::optional<RadialPotential> potential;
};

GridPtr make_solver_grid(const SolverConfig& cfg);

struct SolveResult {
  Field u;
  Field w;
  BoundaryData b_total, b0, b1;
  int iterates = 0;
  std::vector<double> update_norms;         // ||w_{m+1} - w_m||_delta
  std::vector<double> contraction_factors;  // successive ratios
  double pde_residual = 0.0;
  double flux_defect = 0.0;                 // | ||b||^2 - ||f||^2 | / ||f||^2
  double flux_difference = 0.0;             // | ||b||^2 - ||f||^2 |
  double remainder_exponent = 0.0;
  bool exponent_valid = false;
  double forcing_tail_bound = 0.0;          // truncation estimate beyond r_max
  bool converged = false;
  std::string status;                       // converged | max_iter | diverged
  // admissibility flags are recorded, not enforced: the small-data
  // contraction is probed empirically either way
  bool admissible_strict = true;            // (p-1)(n-1) > 4
  bool admissible_pn = true;                // (p-1)(n-1)/2 > 2
  std::vector<std::string> warnings;
  ExpansionFit outgoing_fit;                // fit of full u, outgoing channel
};

SolveResult picard_solve(const BoundaryData& f, const Nonlinearity& N,
                         const SolverConfig& cfg,
                         const ModeTable* table = nullptr);

struct ScatteringReport {
  double hk_f = 0.0, hk_b = 0.0;
  double flux_defect = 0.0;
  double remainder_exponent = 0.0;
  bool exponent_valid = false;
  int iterates = 0;
  bool converged = false;
  double pde_residual = 0.0;
};

std::pair<BoundaryData, ScatteringReport> scattering_map(
    const BoundaryData& f, const Nonlinearity& N, const SolverConfig& cfg,
    const ModeTable* table = nullptr, SolveResult* full = nullptr);

// Largest t in [t_lo, t_hi] (relative bracket 0.05) for which
// picard_solve(t * direction) converges; direction is unit-normalised in
// H^k.  Raises PreconditionError when t_lo already fails.
double threshold_search(const BoundaryData& direction, const Nonlinearity& N,
                        const SolverConfig& cfg, double t_lo, double t_hi);

// || (H - lambda^2) u - N[u] ||_delta / ( ||lambda^2 u|| + ||N[u]|| ), the
// radial operator applied by interior finite differences (7-point stencils).
double pde_residual(const Field& u, const Nonlinearity& N,
                    const RadialPotential* potential, double delta,
                    double dealias_factor);

// Flux defect for gauge-invariant real nonlinearities; refuses otherwise.
double flux_check(const BoundaryData& f, const BoundaryData& b,
                  const Nonlinearity& N);

// First Born approximation of the outgoing correction:
// L(-lambda) R(lambda+i0) N[u0].  Independent code path from the Picard b1.
BoundaryData born_term(const BoundaryData& f, const Nonlinearity& N,
                       const SolverConfig& cfg, const ModeTable* table = nullptr);

}  // namespace nlhelm
