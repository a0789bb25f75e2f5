// Far-field limits L(+-lambda): the limit of r^{(n-1)/2} e^{-+ i lambda r}
// u(r,.) over a radius window, with the asymptotic-series acceleration and
// a fitted remainder exponent.
//
// sign = +1 multiplies by e^{-i lambda r} and extracts the coefficient of
// e^{+i lambda r} (the outgoing data b); sign = -1 extracts the incoming
// data f.
#pragma once

#include "nlhelm/linfield.hpp"

namespace nlhelm {

struct ExtractOptions {
  int num_radii = 12;
  int terms = 3;       // J: expansion terms reported / acceleration order
  int sobolev_k = 2;   // k of the H^k / H^{k-2} norms in the report
  double window_lo_shift = 0.0;  // moves the window start (stability checks)
};

struct ExpansionFit {
  BoundaryData leading;                  // the limit (b or f)
  std::vector<BoundaryData> terms;       // v_1..v_J from the recursion
  double remainder_exponent = 0.0;       // fitted eps'
  bool exponent_valid = false;
  double fit_residual = 0.0;             // rel. misfit incl. remainder term
  double residual_accelerated = 0.0;     // rel. misfit of the shaped fit
  double residual_flat = 0.0;            // rel. misfit, shapes frozen to 1
  std::vector<double> radii;
  std::vector<double> remainder_norm;    // ||utilde(r_i)-model||_{H^{k-2}}
  double leading_hk = 0.0;               // hk_norm(leading, k)
  double leading_hkm2 = 0.0;             // hk_norm(leading, k-2)
};

// v_{j+1} = (+-i / (2 (j+1) lambda)) (nu^2 - 1/4 - j(j+1)) v_j per mode,
// i.e. v_j / v_0 = (+-i)^j a_j(nu) lambda^{-j} with a_j the Poincare
// coefficients of H^(1,2)_nu; sign=+1 is the outgoing expansion.
std::vector<BoundaryData> expansion_terms(const BoundaryData& v0, int count,
                                          int sign, double lambda);

// Constrained least squares over radii in [2 r_match, r_max]: two channels
// (limit + counter-oscillation), channel shapes the exact normalised Hankel
// profiles from the mode table (the resummed asymptotic series), plus an
// unconstrained r^{-eps'} term fit on the residual.
ExpansionFit extract_limit(const Field& u, int sign, const ModeTable& table,
                           const ExtractOptions& opt = {});

// Convenience overload building a free-case table for u's grid.
ExpansionFit extract_limit(const Field& u, int sign,
                           const ExtractOptions& opt = {});

}  // namespace nlhelm
