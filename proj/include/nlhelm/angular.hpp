// Boundary data on the sphere at infinity and its angular transforms.
//
// n=2: Fourier modes e^{il theta}/sqrt(2pi), l = -L..L, on a uniform
//      trapezoid grid.
// n=3: zonal (axisymmetric) data in normalised Legendre modes
//      Ptilde_l(cos theta) = sqrt((2l+1)/4pi) P_l(cos theta), l = 0..L,
//      on a Gauss-Legendre grid in t = cos theta.
//
// The basis is orthonormal in L^2(S^{n-1}); quadratures are exact for
// products of basis functions up to the stated band limit.
#pragma once

#include <cstddef>
#include <vector>

#include "nlhelm/types.hpp"

namespace nlhelm {

struct BoundaryData {
  int dim_n = 3;
  int max_mode = 0;                        // L
  std::vector<cplx> coeffs;                // n=2: 2L+1 entries, n=3: L+1

  static BoundaryData zeros(int dim_n, int max_mode);

  std::size_t index_of(int ell) const;     // throws MismatchError off-range
  cplx& at(int ell) { return coeffs[index_of(ell)]; }
  const cplx& at(int ell) const { return coeffs[index_of(ell)]; }
};

// number of coefficients for the given convention
std::size_t mode_count(int dim_n, int max_mode);
// list of mode numbers in storage order
std::vector<int> mode_list(int dim_n, int max_mode);
// l(l+n-2): magnitude of the Laplace-Beltrami eigenvalue of mode l
double angular_eigenvalue(int dim_n, int ell);

struct AngularGrid {
  int dim_n = 3;
  int max_mode = 0;                        // band limit it resolves
  std::vector<double> nodes;               // n=2: theta; n=3: t = cos theta
  std::vector<double> weights;             // full surface measure folded in
};

// Grid of at least max(min_size, 2L+2) points whose quadrature integrates
// products of basis functions up to degree 2L exactly.
AngularGrid make_angular_grid(int dim_n, int max_mode, std::size_t min_size = 0);

// basis function value e_l(node)
cplx basis_value(const AngularGrid& grid, int ell, std::size_t node);

// pointwise evaluation of the expansion on the grid nodes
std::vector<cplx> synth(const BoundaryData& f, const AngularGrid& grid);

// quadrature inner products against the basis; left inverse of synth on
// band-limited data
BoundaryData analyze(const std::vector<cplx>& values, const AngularGrid& grid,
                     int max_mode);

// analyst's (negative-definite) Laplacian: mode l -> -l(l+n-2) * mode l
BoundaryData laplace_beltrami(const BoundaryData& f);

// ( sum_l (1 + l(l+n-2))^k |f_l|^2 )^{1/2}
double hk_norm(const BoundaryData& f, int k);

// quadrature L^2 inner product <u, v> = sum_j w_j u_j conj(v_j)
cplx grid_inner(const std::vector<cplx>& u, const std::vector<cplx>& v,
                const AngularGrid& grid);

BoundaryData operator+(const BoundaryData& a, const BoundaryData& b);
BoundaryData operator-(const BoundaryData& a, const BoundaryData& b);
BoundaryData operator*(cplx s, const BoundaryData& a);

// seeded band-limited data with coefficients ~ (1+l(l+n-2))^{-(k+1)/2},
// scaled to the requested H^k norm; generator documented in types.hpp
BoundaryData random_boundary_data(int dim_n, int max_mode, int k,
                                  double hk_target, Rng& rng);

}  // namespace nlhelm
