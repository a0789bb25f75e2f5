#include "nlhelm/angular.hpp"

#include <cmath>

#include "nlhelm/quadrature.hpp"

namespace nlhelm {

namespace {

void check_dim(int dim_n) {
  if (dim_n != 2 && dim_n != 3)
    throw MismatchError("angular: dim_n must be 2 or 3");
}

// Ptilde_l(t) for l = 0..L by the standard upward recurrence.
void legendre_row(double t, int max_mode, std::vector<double>& out) {
  out.resize(max_mode + 1);
  double p0 = 1.0, p1 = t;
  for (int l = 0; l <= max_mode; ++l) {
    double pl;
    if (l == 0)
      pl = p0;
    else if (l == 1)
      pl = p1;
    else {
      const double p2 = ((2.0 * l - 1.0) * t * p1 - (l - 1.0) * p0) / l;
      p0 = p1;
      p1 = p2;
      pl = p2;
    }
    out[l] = std::sqrt((2.0 * l + 1.0) / (4.0 * kPi)) * pl;
  }
}

}  // namespace

std::size_t mode_count(int dim_n, int max_mode) {
  check_dim(dim_n);
  if (max_mode < 0) throw MismatchError("angular: max_mode must be >= 0");
  return dim_n == 2 ? static_cast<std::size_t>(2 * max_mode + 1)
                    : static_cast<std::size_t>(max_mode + 1);
}

std::vector<int> mode_list(int dim_n, int max_mode) {
  std::vector<int> ells;
  if (dim_n == 2)
    for (int l = -max_mode; l <= max_mode; ++l) ells.push_back(l);
  else
    for (int l = 0; l <= max_mode; ++l) ells.push_back(l);
  return ells;
}

double angular_eigenvalue(int dim_n, int ell) {
  const double l = std::abs(ell);
  return l * (l + dim_n - 2.0);
}

BoundaryData BoundaryData::zeros(int dim_n, int max_mode) {
  BoundaryData f;
  f.dim_n = dim_n;
  f.max_mode = max_mode;
  f.coeffs.assign(mode_count(dim_n, max_mode), cplx(0.0, 0.0));
  return f;
}

std::size_t BoundaryData::index_of(int ell) const {
  if (dim_n == 2) {
    if (ell < -max_mode || ell > max_mode)
      throw MismatchError("BoundaryData: mode out of range");
    return static_cast<std::size_t>(ell + max_mode);
  }
  if (ell < 0 || ell > max_mode)
    throw MismatchError("BoundaryData: mode out of range");
  return static_cast<std::size_t>(ell);
}

AngularGrid make_angular_grid(int dim_n, int max_mode, std::size_t min_size) {
  check_dim(dim_n);
  std::size_t q = std::max<std::size_t>(2 * max_mode + 2, min_size);
  AngularGrid grid;
  grid.dim_n = dim_n;
  grid.max_mode = max_mode;
  if (dim_n == 2) {
    grid.nodes.resize(q);
    grid.weights.assign(q, 2.0 * kPi / static_cast<double>(q));
    for (std::size_t j = 0; j < q; ++j)
      grid.nodes[j] = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(q);
  } else {
    const GaussRule rule = gauss_legendre(static_cast<int>(q));
    grid.nodes = rule.nodes;
    grid.weights.resize(q);
    for (std::size_t j = 0; j < q; ++j)
      grid.weights[j] = 2.0 * kPi * rule.weights[j];  // azimuthal factor
  }
  return grid;
}

cplx basis_value(const AngularGrid& grid, int ell, std::size_t node) {
  if (grid.dim_n == 2) {
    const double th = grid.nodes[node];
    return std::exp(cplx(0.0, ell * th)) / std::sqrt(2.0 * kPi);
  }
  std::vector<double> row;
  legendre_row(grid.nodes[node], std::abs(ell), row);
  return cplx(row[std::abs(ell)], 0.0);
}

std::vector<cplx> synth(const BoundaryData& f, const AngularGrid& grid) {
  if (grid.dim_n != f.dim_n)
    throw MismatchError("synth: grid/data dimension mismatch");
  if (grid.nodes.size() < static_cast<std::size_t>(2 * f.max_mode + 2))
    throw MismatchError("synth: grid too small for band limit");
  const std::size_t q = grid.nodes.size();
  std::vector<cplx> out(q, cplx(0.0, 0.0));
  if (f.dim_n == 2) {
    const double norm = 1.0 / std::sqrt(2.0 * kPi);
    for (std::size_t j = 0; j < q; ++j) {
      const double th = grid.nodes[j];
      cplx acc(0.0, 0.0);
      for (int l = -f.max_mode; l <= f.max_mode; ++l)
        acc += f.coeffs[f.index_of(l)] * std::exp(cplx(0.0, l * th));
      out[j] = norm * acc;
    }
  } else {
    std::vector<double> row;
    for (std::size_t j = 0; j < q; ++j) {
      legendre_row(grid.nodes[j], f.max_mode, row);
      cplx acc(0.0, 0.0);
      for (int l = 0; l <= f.max_mode; ++l) acc += f.coeffs[l] * row[l];
      out[j] = acc;
    }
  }
  return out;
}

BoundaryData analyze(const std::vector<cplx>& values, const AngularGrid& grid,
                     int max_mode) {
  if (values.size() != grid.nodes.size())
    throw MismatchError("analyze: value count does not match grid");
  if (grid.nodes.size() < static_cast<std::size_t>(2 * max_mode + 2))
    throw MismatchError("analyze: grid too small for band limit");
  BoundaryData f = BoundaryData::zeros(grid.dim_n, max_mode);
  const std::size_t q = grid.nodes.size();
  if (grid.dim_n == 2) {
    const double norm = 1.0 / std::sqrt(2.0 * kPi);
    for (int l = -max_mode; l <= max_mode; ++l) {
      cplx acc(0.0, 0.0);
      for (std::size_t j = 0; j < q; ++j)
        acc += grid.weights[j] * values[j] *
               std::exp(cplx(0.0, -l * grid.nodes[j]));
      f.coeffs[f.index_of(l)] = norm * acc;
    }
  } else {
    std::vector<double> row;
    std::vector<cplx> acc(max_mode + 1, cplx(0.0, 0.0));
    for (std::size_t j = 0; j < q; ++j) {
      legendre_row(grid.nodes[j], max_mode, row);
      for (int l = 0; l <= max_mode; ++l)
        acc[l] += grid.weights[j] * values[j] * row[l];
    }
    f.coeffs = std::move(acc);
  }
  return f;
}

BoundaryData laplace_beltrami(const BoundaryData& f) {
  BoundaryData out = f;
  for (int ell : mode_list(f.dim_n, f.max_mode))
    out.coeffs[f.index_of(ell)] *= -angular_eigenvalue(f.dim_n, ell);
  return out;
}

double hk_norm(const BoundaryData& f, int k) {
  if (k < 0) throw std::domain_error("hk_norm: k must be nonnegative");
  long double s = 0.0L;
  for (int ell : mode_list(f.dim_n, f.max_mode)) {
    const double w = std::pow(1.0 + angular_eigenvalue(f.dim_n, ell), k);
    s += (long double)(w * std::norm(f.coeffs[f.index_of(ell)]));
  }
  return std::sqrt((double)s);
}

cplx grid_inner(const std::vector<cplx>& u, const std::vector<cplx>& v,
                const AngularGrid& grid) {
  if (u.size() != grid.nodes.size() || v.size() != grid.nodes.size())
    throw MismatchError("grid_inner: size mismatch");
  cplx s(0.0, 0.0);
  for (std::size_t j = 0; j < u.size(); ++j)
    s += grid.weights[j] * u[j] * std::conj(v[j]);
  return s;
}

namespace {
BoundaryData combine(const BoundaryData& a, const BoundaryData& b, double sb) {
  if (a.dim_n != b.dim_n || a.max_mode != b.max_mode)
    throw MismatchError("BoundaryData: shape mismatch in arithmetic");
  BoundaryData out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i)
    out.coeffs[i] += sb * b.coeffs[i];
  return out;
}
}  // namespace

BoundaryData operator+(const BoundaryData& a, const BoundaryData& b) {
  return combine(a, b, 1.0);
}
BoundaryData operator-(const BoundaryData& a, const BoundaryData& b) {
  return combine(a, b, -1.0);
}
BoundaryData operator*(cplx s, const BoundaryData& a) {
  BoundaryData out = a;
  for (auto& c : out.coeffs) c *= s;
  return out;
}

BoundaryData random_boundary_data(int dim_n, int max_mode, int k,
                                  double hk_target, Rng& rng) {
  BoundaryData f = BoundaryData::zeros(dim_n, max_mode);
  for (int ell : mode_list(dim_n, max_mode)) {
    const double decay =
        std::pow(1.0 + angular_eigenvalue(dim_n, ell), -0.5 * (k + 1));
    f.coeffs[f.index_of(ell)] = decay * cplx(rng.sym(), rng.sym());
  }
  const double norm = hk_norm(f, k);
  if (norm > 0.0) f = cplx(hk_target / norm, 0.0) * f;
  return f;
}

}  // namespace nlhelm
