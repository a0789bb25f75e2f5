#include "nlhelm/linfield.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "nlhelm/ode.hpp"
#include "nlhelm/quadrature.hpp"

namespace nlhelm {

namespace {

// far-field amplitude of h+_l = r^{-(n-2)/2} H^(1)_nu(lambda r)
cplx out_amplitude(Order nu, double lambda) {
  const double phase = -(0.5 * nu.value() + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * lambda)) * cplx(std::cos(phase), std::sin(phase));
}

// psi'' = Q(r) psi with Q = (nu^2 - 1/4)/r^2 + V - lambda^2, as a 4-real
// system (re psi, im psi, re psi', im psi')
struct RadialOde {
  double nu2m14;
  double lambda2;
  const RadialPotential* V;
  void operator()(double r, const double* y, double* dy) const {
    const double q = nu2m14 / (r * r) + (V ? (*V)(r) : 0.0) - lambda2;
    dy[0] = y[2];
    dy[1] = y[3];
    dy[2] = q * y[0];
    dy[3] = q * y[1];
  }
};

}  // namespace

ModeTable::ModeTable(GridPtr grid, int dim_n, int max_mode,
                     const RadialPotential* potential)
    : grid_(std::move(grid)), dim_n_(dim_n), max_mode_(max_mode),
      has_potential_(potential != nullptr) {
  const RadialGrid& g = *grid_;
  const std::size_t M = g.size();
  const int q = g.panel_order;
  const double lambda = g.lambda;
  const double nm1 = dim_n_ - 1.0;
  const double half_pow = 0.5 * (dim_n_ - 2.0);  // u = r^{-half_pow} C_nu(lambda r)

  if (potential) check_potential(*potential, g);

  for (int ell : mode_list(dim_n_, max_mode_)) {
    ModeData d;
    d.ell = ell;
    d.nu = order_for_mode(dim_n_, ell);
    d.reg.assign(M, 0.0);
    d.reg_prime.assign(M, 0.0);
    d.out.assign(M, cplx(0, 0));
    d.out_prime.assign(M, cplx(0, 0));
    d.amp_out = out_amplitude(d.nu, lambda);
    modes_.push_back(std::move(d));
  }

  // ---- radial profiles at the nodes --------------------------------------
  if (!potential) {
    // one J/Y ladder per node serves every mode
    const int two_mu = (dim_n_ == 3) ? 1 : 0;
    const int max_idx = max_mode_ + 1;  // +1 for the derivative relation
    for (std::size_t i = 0; i < M; ++i) {
      const double r = g.nodes[i];
      const double z = lambda * r;
      const BesselLadder lad = bessel_jy_ladder(two_mu, max_idx, z);
      const double rw = std::pow(r, -half_pow);
      for (auto& d : modes_) {
        const int idx = (dim_n_ == 3) ? d.ell : std::abs(d.ell);
        const double nuval = d.nu.value();
        const double J = lad.J[idx], Jp = (nuval / z) * lad.J[idx] - lad.J[idx + 1];
        const double Y = lad.Y[idx], Yp = (nuval / z) * lad.Y[idx] - lad.Y[idx + 1];
        // u = r^{-p} C(lambda r), u' = r^{-p}(lambda C' - (p/r) C)
        d.reg[i] = rw * J;
        d.reg_prime[i] = rw * (lambda * Jp - half_pow / r * J);
        d.out[i] = rw * cplx(J, Y);
        d.out_prime[i] =
            rw * (lambda * cplx(Jp, Yp) - half_pow / r * cplx(J, Y));
      }
    }
  } else {
    OdeOptions oopt;
    oopt.rtol = 1e-12;
    oopt.atol = 1e-280;
    for (auto& d : modes_) {
      const double nuval = d.nu.value();
      RadialOde rhs{nuval * nuval - 0.25, lambda * lambda, potential};
      auto oderhs = [&rhs](double t, const double* y, double* dy) { rhs(t, y, dy); };

      // Regular solution: free J-type data imposed below r_min so the
      // V-induced admixture of the singular branch (~ V r0^2 / nu) sits
      // under the residual tolerances; for larger nu the centrifugal term
      // dominates V and no sub-r_min start is needed (and J would underflow).
      {
        const double r0 =
            g.r_min * std::min(1.0, 0.005 * (1.0 + nuval * nuval));
        const double z0 = lambda * r0;
        const double J = bessel_j(d.nu, z0);
        const double Jp = bessel_j_prime(d.nu, z0);
        std::vector<double> y = {std::sqrt(r0) * J, 0.0,
                                 0.5 / std::sqrt(r0) * J + std::sqrt(r0) * lambda * Jp,
                                 0.0};
        double t = r0;
        for (std::size_t i = 0; i < M; ++i) {
          integrate_dp5(4, oderhs, t, y, g.nodes[i], oopt);
          const double r = g.nodes[i];
          const double uw = std::pow(r, -0.5 * nm1);
          d.reg[i] = uw * y[0];
          d.reg_prime[i] = uw * (y[2] - 0.5 * nm1 / r * y[0]);
        }
      }
      // outgoing solution: h+ data at r_max, integrated inward
      {
        const double r1 = g.r_max;
        const double z1 = lambda * r1;
        const cplx H = hankel(1, d.nu, z1);
        const cplx Hp = hankel_prime(1, d.nu, z1);
        const cplx psi = std::sqrt(r1) * H;
        const cplx psip = 0.5 / std::sqrt(r1) * H + std::sqrt(r1) * lambda * Hp;
        std::vector<double> y = {psi.real(), psi.imag(), psip.real(), psip.imag()};
        double t = r1;
        for (std::size_t i = M; i-- > 0;) {
          integrate_dp5(4, oderhs, t, y, g.nodes[i], oopt);
          const double r = g.nodes[i];
          const double uw = std::pow(r, -0.5 * nm1);
          d.out[i] = uw * cplx(y[0], y[1]);
          d.out_prime[i] =
              uw * (cplx(y[2], y[3]) - 0.5 * nm1 / r * cplx(y[0], y[1]));
        }
      }
    }
  }

  // ---- Wronskians, Green constants, matching coefficients ---------------
  auto wron_at = [&](const ModeData& d, std::size_t i) -> cplx {
    const double rn = std::pow(g.nodes[i], nm1);
    return rn * (d.reg[i] * d.out_prime[i] - d.reg_prime[i] * d.out[i]);
  };
  for (auto& d : modes_) {
    const std::size_t iref = M - 2;
    d.wronskian = wron_at(d, iref);
    if (std::abs(d.wronskian) < 1e-12)
      throw NumericalError("mode table: Wronskian below 1e-12 (numerical resonance)");
    double drift = 0.0;
    for (int j = 0; j < 10; ++j) {
      const std::size_t i = (M - 1) * j / 9;
      drift = std::max(drift,
                       std::abs(wron_at(d, i) - d.wronskian) / std::abs(d.wronskian));
    }
    d.wronskian_drift = drift;
    d.kappa = -1.0 / d.wronskian;

    if (!potential) {
      d.a_in = cplx(0.5, 0.0);  // J = (H1 + H2)/2 exactly
    } else {
      const std::size_t i = M - 2;
      const double rn = std::pow(g.nodes[i], nm1);
      const cplx w_in_out =
          rn * (std::conj(d.out[i]) * d.out_prime[i] -
                std::conj(d.out_prime[i]) * d.out[i]);
      d.a_in = d.wronskian / w_in_out;
    }
  }

  // ---- quadrature tables --------------------------------------------------
  // Per panel k, the smooth forcing F is represented by one degree-(S-1)
  // interpolant through the stencil of S = 2q consecutive nodes centred on
  // the panel; the (steep) radial kernels are evaluated exactly at the
  // sub-quadrature points.  Stored weights:
  //   panel_reg[k*S+j] = int_{a_k}^{b_k} u_reg(x) x^{n-1} l_j(x) dx
  //   c_reg   [i*S+j] = int_{a_k}^{r_i} u_reg(x) x^{n-1} l_j(x) dx
  // and u_out counterparts on the complementary interval (stored as
  // panel - left, the exact complement).  Partial rows therefore join
  // the prefix/suffix panel sums with no seam at panel boundaries.
  const std::size_t npan = g.npanels();
  stencil_ = (int)std::min<std::size_t>(2 * q, M);
  const int S = stencil_;
  sbase_.resize(npan);
  for (std::size_t k = 0; k < npan; ++k) {
    const long want = (long)(k * q) - q / 2;
    sbase_[k] = (std::size_t)std::clamp<long>(want, 0, (long)M - S);
  }
  for (auto& d : modes_) {
    d.panel_reg.assign(npan * S, 0.0);
    d.panel_out.assign(npan * S, cplx(0, 0));
    d.c_reg.assign(M * S, 0.0);
    d.c_out.assign(M * S, cplx(0, 0));
  }

  // Sample plan: Gauss points of every full panel, every left interval
  // [a_k, r_i] (regular kernel) and every right interval [r_i, b_k]
  // (outgoing kernel).  Near the origin the kernels vary like
  // r^{+-(nu+1/2)}, so intervals are geometrically subdivided until each
  // piece spans a bounded kernel ratio; quadrature errors then stay
  // relative to the local kernel scale at both ends of the panel.
  struct SamplePt {
    double x;
    double w;
    std::uint32_t panel;
    std::int32_t node;  // -1: full panel; else node index
    std::int8_t kind;   // 0 full, 1 left (reg), 2 right (out)
    std::vector<double> lag;
  };
  const double nu_max =
      (dim_n_ == 3) ? max_mode_ + 0.5 : (double)std::max(max_mode_, 1);
  const GaussRule sub = gauss_legendre(q + 2);
  std::vector<SamplePt> plan;
  plan.reserve((npan + 2 * M) * sub.nodes.size());
  std::vector<double> sten_nodes(S);
  for (std::size_t k = 0; k < npan; ++k) {
    const double a = g.edges[k], b = g.edges[k + 1];
    const std::size_t sb = sbase_[k];
    for (int j = 0; j < S; ++j) sten_nodes[j] = g.nodes[sb + j];
    auto push_interval = [&](double lo, double hi, std::int32_t node,
                             std::int8_t kind) {
      if (!(hi > lo)) return;
      const double sigma = (nu_max + 0.5) / lo + lambda;  // kernel log-slope
      const int pieces =
          (int)std::clamp(std::ceil((hi - lo) * sigma / 2.0), 1.0, 64.0);
      for (int p = 0; p < pieces; ++p) {
        const double plo = lo + (hi - lo) * p / pieces;
        const double phi = lo + (hi - lo) * (p + 1) / pieces;
        const double mid = 0.5 * (plo + phi), half = 0.5 * (phi - plo);
        for (std::size_t s = 0; s < sub.nodes.size(); ++s) {
          SamplePt pt;
          pt.x = mid + half * sub.nodes[s];
          pt.w = half * sub.weights[s];
          pt.panel = (std::uint32_t)k;
          pt.node = node;
          pt.kind = kind;
          pt.lag = lagrange_weights(pt.x, sten_nodes);
          plan.push_back(std::move(pt));
        }
      }
    };
    push_interval(a, b, -1, 0);
    for (int qi = 0; qi < q; ++qi) {
      const std::size_t i = k * q + qi;
      push_interval(a, g.nodes[i], (std::int32_t)i, 1);
      push_interval(g.nodes[i], b, (std::int32_t)i, 2);
    }
  }
  std::sort(plan.begin(), plan.end(),
            [](const SamplePt& a, const SamplePt& b) { return a.x < b.x; });

  auto accumulate = [&](std::size_t mode, const SamplePt& pt, double kreg,
                        cplx kout) {
    auto& d = modes_[mode];
    const double meas = pt.w * std::pow(pt.x, nm1);
    switch (pt.kind) {
      case 0:
        for (int j = 0; j < S; ++j) {
          d.panel_reg[pt.panel * S + j] += meas * kreg * pt.lag[j];
          d.panel_out[pt.panel * S + j] += meas * kout * pt.lag[j];
        }
        break;
      case 1:
        for (int j = 0; j < S; ++j)
          d.c_reg[(std::size_t)pt.node * S + j] += meas * kreg * pt.lag[j];
        break;
      default:
        for (int j = 0; j < S; ++j)
          d.c_out[(std::size_t)pt.node * S + j] += meas * kout * pt.lag[j];
    }
  };

  if (!potential) {
    const int two_mu = (dim_n_ == 3) ? 1 : 0;
    const int max_idx = max_mode_ + 1;
    const double hp = half_pow;
    for (const SamplePt& pt : plan) {
      const double z = lambda * pt.x;
      const BesselLadder lad = bessel_jy_ladder(two_mu, max_idx, z);
      const double rw = std::pow(pt.x, -hp);
      for (std::size_t m = 0; m < modes_.size(); ++m) {
        const int idx = (dim_n_ == 3) ? modes_[m].ell : std::abs(modes_[m].ell);
        accumulate(m, pt, rw * lad.J[idx], rw * cplx(lad.J[idx], lad.Y[idx]));
      }
    }
  } else {
    OdeOptions oopt;
    oopt.rtol = 1e-12;
    oopt.atol = 1e-280;
    for (std::size_t m = 0; m < modes_.size(); ++m) {
      auto& d = modes_[m];
      const double nuval = d.nu.value();
      RadialOde rhs{nuval * nuval - 0.25, lambda * lambda, potential};
      auto oderhs = [&rhs](double t, const double* y, double* dy) { rhs(t, y, dy); };
      // regular kernel, ascending pass (same sub-r_min start as above)
      {
        const double r0 =
            g.r_min * std::min(1.0, 0.005 * (1.0 + nuval * nuval));
        const double z0 = lambda * r0;
        const double J = bessel_j(d.nu, z0);
        const double Jp = bessel_j_prime(d.nu, z0);
        std::vector<double> y = {std::sqrt(r0) * J, 0.0,
                                 0.5 / std::sqrt(r0) * J +
                                     std::sqrt(r0) * lambda * Jp,
                                 0.0};
        double t = r0;
        for (const SamplePt& pt : plan) {
          integrate_dp5(4, oderhs, t, y, pt.x, oopt);
          accumulate(m, pt, std::pow(pt.x, -0.5 * nm1) * y[0], cplx(0, 0));
        }
      }
      // outgoing kernel, descending pass
      {
        const double r1 = g.r_max;
        const double z1 = lambda * r1;
        const cplx H = hankel(1, d.nu, z1);
        const cplx Hp = hankel_prime(1, d.nu, z1);
        const cplx psi = std::sqrt(r1) * H;
        const cplx psip = 0.5 / std::sqrt(r1) * H + std::sqrt(r1) * lambda * Hp;
        std::vector<double> y = {psi.real(), psi.imag(), psip.real(),
                                 psip.imag()};
        double t = r1;
        for (std::size_t s = plan.size(); s-- > 0;) {
          const SamplePt& pt = plan[s];
          integrate_dp5(4, oderhs, t, y, pt.x, oopt);
          accumulate(m, pt, 0.0,
                     std::pow(pt.x, -0.5 * nm1) * cplx(y[0], y[1]));
        }
      }
    }
  }

}

const ModeTable::ModeData& ModeTable::mode(int ell) const {
  BoundaryData probe;
  probe.dim_n = dim_n_;
  probe.max_mode = max_mode_;
  return modes_[probe.index_of(ell)];
}

void ModeTable::debug_scale_kappa(double s) {
  for (auto& d : modes_) d.kappa *= s;
}

ModeField free_mode(int dim_n, int ell, const RadialGrid& grid) {
  ModeField m;
  m.ell = ell;
  m.nu = order_for_mode(dim_n, ell);
  m.values.resize(grid.size());
  const double half_pow = 0.5 * (dim_n - 2.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.nodes[i];
    m.values[i] = std::pow(r, -half_pow) * bessel_j(m.nu, grid.lambda * r);
  }
  return m;
}

Field poisson_apply(const BoundaryData& f, const ModeTable& table) {
  if (f.dim_n != table.dim_n() || f.max_mode != table.max_mode())
    throw MismatchError("poisson_apply: data does not match table");
  Field u = Field::zeros(f.dim_n, f.max_mode, table.grid_ptr());
  for (std::size_t m = 0; m < table.mode_count(); ++m) {
    const auto& d = table.mode_by_index(m);
    const cplx amp_in = std::conj(d.amp_out);
    const cplx match = d.a_in * amp_in;
    const cplx fl = f.coeffs[m];
    if (fl == cplx(0.0, 0.0)) continue;
    if (std::abs(match) < 1e-14)
      throw NumericalError(
          "poisson_apply: incoming matching coefficient below 1e-14 "
          "(resonant/degenerate mode)");
    const cplx c = fl / match;
    for (std::size_t i = 0; i < u.grid->size(); ++i)
      u.modes[m].values[i] = c * d.reg[i];
  }
  return u;
}

SplitField split_in_out(const Field& u0, const ModeTable& table) {
  if (u0.dim_n != table.dim_n() || u0.max_mode != table.max_mode() ||
      u0.grid != table.grid_ptr())
    throw MismatchError("split_in_out: field does not match table");
  const RadialGrid& g = table.grid();
  SplitField s;
  s.outgoing = Field::zeros(u0.dim_n, u0.max_mode, u0.grid);
  for (std::size_t m = 0; m < table.mode_count(); ++m) {
    const auto& d = table.mode_by_index(m);
    // recover the Poisson coefficient: u0_l = c * u_reg exactly
    cplx num(0, 0);
    double den = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double w = g.weights[i] * d.reg[i];
      num += w * u0.modes[m].values[i];
      den += w * d.reg[i];
    }
    const cplx c = (den != 0.0) ? num / den : cplx(0, 0);
    const cplx a_out = std::conj(d.a_in);  // real V: u_reg = a_in h- + conj(a_in) h+
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double chi = radial_cutoff(g.nodes[i], g.r_match);
      s.outgoing.modes[m].values[i] = chi * c * a_out * d.out[i];
    }
  }
  s.incoming = u0 - s.outgoing;
  return s;
}

Field resolvent_apply(const Field& F, int sign, const ModeTable& table) {
  if (sign != 1 && sign != -1)
    throw std::domain_error("resolvent_apply: sign must be +1 or -1");
  if (F.dim_n != table.dim_n() || F.max_mode != table.max_mode() ||
      F.grid != table.grid_ptr())
    throw MismatchError("resolvent_apply: field does not match table");
  const double tail = far_tail_fraction(F);
  if (tail > 0.2)
    throw PreconditionError(
        "resolvent_apply: forcing carries >20% of its mass beyond 0.8 r_max");

  if (sign == -1) {
    // R(lambda - i0) = conj . R(lambda + i0) . conj  (real potential)
    Field Fc = F;
    for (auto& m : Fc.modes)
      for (auto& v : m.values) v = std::conj(v);
    Field u = resolvent_apply(Fc, +1, table);
    for (auto& m : u.modes)
      for (auto& v : m.values) v = std::conj(v);
    return u;
  }

  const RadialGrid& g = table.grid();
  const std::size_t M = g.size();
  const int S = table.stencil_size();
  const std::size_t npan = g.npanels();
  Field u = Field::zeros(F.dim_n, F.max_mode, F.grid);

  std::vector<cplx> prefix(npan + 1), suffix(npan + 1);
  for (std::size_t m = 0; m < table.mode_count(); ++m) {
    const auto& d = table.mode_by_index(m);
    const std::vector<cplx>& Fv = F.modes[m].values;
    prefix[0] = cplx(0, 0);
    suffix[npan] = cplx(0, 0);
    for (std::size_t p = 0; p < npan; ++p) {
      const std::size_t sb = table.stencil_base(p);
      cplx sa(0, 0);
      for (int j = 0; j < S; ++j) sa += d.panel_reg[p * S + j] * Fv[sb + j];
      prefix[p + 1] = prefix[p] + sa;
    }
    for (std::size_t p = npan; p-- > 0;) {
      const std::size_t sb = table.stencil_base(p);
      cplx sbv(0, 0);
      for (int j = 0; j < S; ++j) sbv += d.panel_out[p * S + j] * Fv[sb + j];
      suffix[p] = suffix[p + 1] + sbv;
    }

    for (std::size_t i = 0; i < M; ++i) {
      const std::size_t k = g.panel_of(i);
      const std::size_t sb = table.stencil_base(k);
      cplx left = prefix[k];
      cplx right = suffix[k + 1];
      for (int j = 0; j < S; ++j) {
        left += d.c_reg[i * S + j] * Fv[sb + j];
        right += d.c_out[i * S + j] * Fv[sb + j];
      }
      u.modes[m].values[i] = d.kappa * (d.out[i] * left + d.reg[i] * right);
    }
  }
  return u;
}

PotentialMode potential_mode(int ell, const RadialPotential& potential,
                             GridPtr grid, int dim_n) {
  ModeTable table(grid, dim_n, std::abs(ell), &potential);
  const auto& d = table.mode(ell);
  PotentialMode pm;
  pm.regular.ell = ell;
  pm.regular.nu = d.nu;
  pm.regular.values.assign(d.reg.begin(), d.reg.end());
  pm.outgoing.ell = ell;
  pm.outgoing.nu = d.nu;
  pm.outgoing.values = d.out;
  pm.wronskian = d.wronskian;
  pm.wronskian_drift = d.wronskian_drift;
  return pm;
}

BoundaryData poisson_adjoint(const Field& F, const ModeTable& table) {
  if (F.dim_n != table.dim_n() || F.max_mode != table.max_mode() ||
      F.grid != table.grid_ptr())
    throw MismatchError("poisson_adjoint: field does not match table");
  const RadialGrid& g = table.grid();
  const double nm1 = F.dim_n - 1.0;
  BoundaryData out = BoundaryData::zeros(F.dim_n, F.max_mode);
  for (std::size_t m = 0; m < table.mode_count(); ++m) {
    const auto& d = table.mode_by_index(m);
    const cplx cP = 1.0 / (d.a_in * std::conj(d.amp_out));
    cplx acc(0, 0);
    for (std::size_t i = 0; i < g.size(); ++i)
      acc += g.weights[i] * std::pow(g.nodes[i], nm1) * d.reg[i] *
             F.modes[m].values[i];
    out.coeffs[m] = std::conj(cP) * acc;
  }
  return out;
}

double far_tail_fraction(const Field& F, double fraction) {
  const RadialGrid& g = *F.grid;
  const double cut = fraction * g.r_max;
  const double nm1 = F.dim_n - 1.0;
  long double tail = 0.0L, total = 0.0L;
  for (const auto& m : F.modes)
    for (std::size_t i = 0; i < g.size(); ++i) {
      const long double c = g.weights[i] * std::pow(g.nodes[i], nm1) *
                            std::norm(m.values[i]);
      total += c;
      if (g.nodes[i] > cut) tail += c;
    }
  if (total <= 0.0L) return 0.0;
  return std::sqrt((double)(tail / total));
}

}  // namespace nlhelm
