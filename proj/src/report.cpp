#include "nlhelm/report.hpp"

#include <cstdio>

namespace nlhelm {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void JsonWriter::sep() {
  if (stack_.empty()) return;
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (first_.back() == '1')
    first_.back() = '0';
  else
    os_ << ",";
}

JsonWriter& JsonWriter::begin_object() {
  sep();
  os_ << "{";
  stack_.push_back('o');
  first_.push_back('1');
  return *this;
}
JsonWriter& JsonWriter::end_object() {
  os_ << "}";
  stack_.pop_back();
  first_.pop_back();
  return *this;
}
JsonWriter& JsonWriter::begin_array() {
  sep();
  os_ << "[";
  stack_.push_back('a');
  first_.push_back('1');
  return *this;
}
JsonWriter& JsonWriter::end_array() {
  os_ << "]";
  stack_.pop_back();
  first_.pop_back();
  return *this;
}
JsonWriter& JsonWriter::key(const std::string& k) {
  sep();
  os_ << "\"" << k << "\":";
  pending_key_ = true;
  return *this;
}
JsonWriter& JsonWriter::value(double v) {
  sep();
  os_ << format_g17(v);
  return *this;
}
JsonWriter& JsonWriter::value(int v) {
  sep();
  os_ << v;
  return *this;
}
JsonWriter& JsonWriter::value(std::size_t v) {
  sep();
  os_ << v;
  return *this;
}
JsonWriter& JsonWriter::value(bool v) {
  sep();
  os_ << (v ? "true" : "false");
  return *this;
}
JsonWriter& JsonWriter::value(const std::string& v) {
  sep();
  os_ << "\"" << v << "\"";
  return *this;
}
JsonWriter& JsonWriter::value(const cplx& v) {
  sep();
  os_ << "[" << format_g17(v.real()) << "," << format_g17(v.imag()) << "]";
  return *this;
}

void write_boundary_json(JsonWriter& w, const BoundaryData& f) {
  w.begin_object();
  w.key("dim_n").value(f.dim_n);
  w.key("L").value(f.max_mode);
  w.key("coeffs").begin_array();
  for (const cplx& c : f.coeffs) w.value(c);
  w.end_array();
  w.end_object();
}

void write_expansion_json(JsonWriter& w, const ExpansionFit& fit) {
  w.begin_object();
  w.key("leading");
  write_boundary_json(w, fit.leading);
  w.key("terms").begin_array();
  for (const auto& t : fit.terms) write_boundary_json(w, t);
  w.end_array();
  w.key("remainder_exponent").value(fit.remainder_exponent);
  w.key("exponent_valid").value(fit.exponent_valid);
  w.key("fit_residual").value(fit.fit_residual);
  w.key("residual_accelerated").value(fit.residual_accelerated);
  w.key("residual_flat").value(fit.residual_flat);
  w.key("radii").begin_array();
  for (double r : fit.radii) w.value(r);
  w.end_array();
  w.key("leading_hk").value(fit.leading_hk);
  w.key("leading_hkm2").value(fit.leading_hkm2);
  w.end_object();
}

void write_field_json(JsonWriter& w, const Field& u) {
  const RadialGrid& g = *u.grid;
  w.begin_object();
  w.key("dim_n").value(u.dim_n);
  w.key("L").value(u.max_mode);
  w.key("grid").begin_object();
  w.key("r_min").value(g.r_min);
  w.key("r_match").value(g.r_match);
  w.key("r_max").value(g.r_max);
  w.key("lambda").value(g.lambda);
  w.key("panel_order").value(g.panel_order);
  w.key("nodes").value(g.size());
  w.end_object();
  w.key("modes").begin_array();
  for (const auto& m : u.modes) {
    w.begin_object();
    w.key("ell").value(m.ell);
    w.key("values").begin_array();
    for (const cplx& v : m.values) w.value(v);
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.end_object();
}

void write_linear_result_json(std::ostream& os, const BoundaryData& f,
                              const BoundaryData& b0, const ExpansionFit& in_fit,
                              const ExpansionFit& out_fit, int sobolev_k,
                              double split_error, double zero_limit_plus,
                              double zero_limit_minus) {
  JsonWriter w(os);
  w.begin_object();
  w.key("schema").value(1);
  w.key("f");
  write_boundary_json(w, f);
  w.key("b0");
  write_boundary_json(w, b0);
  w.key("multipliers").begin_array();
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    const cplx fl = f.coeffs[i];
    w.value(fl == cplx(0.0, 0.0) ? cplx(0.0, 0.0) : b0.coeffs[i] / fl);
  }
  w.end_array();
  w.key("hk_f").value(hk_norm(f, sobolev_k));
  w.key("hk_b0").value(hk_norm(b0, sobolev_k));
  w.key("incoming_fit");
  write_expansion_json(w, in_fit);
  w.key("outgoing_fit");
  write_expansion_json(w, out_fit);
  w.key("split_reconstruction_error").value(split_error);
  w.key("zero_limit_outgoing_incoming_extract").value(zero_limit_plus);
  w.key("zero_limit_incoming_outgoing_extract").value(zero_limit_minus);
  w.end_object();
  os << "\n";
}

void write_solve_result_json(std::ostream& os, const BoundaryData& f,
                             const SolveResult& res, const ScatteringReport& rep) {
  JsonWriter w(os);
  w.begin_object();
  w.key("schema").value(1);
  w.key("status").value(res.status);
  w.key("converged").value(res.converged);
  w.key("iterates").value(res.iterates);
  w.key("f");
  write_boundary_json(w, f);
  w.key("b");
  write_boundary_json(w, res.b_total);
  w.key("b0");
  write_boundary_json(w, res.b0);
  w.key("b1");
  write_boundary_json(w, res.b1);
  w.key("hk_f").value(rep.hk_f);
  w.key("hk_b").value(rep.hk_b);
  w.key("flux_defect").value(res.flux_defect);
  w.key("flux_difference").value(res.flux_difference);
  w.key("pde_residual").value(res.pde_residual);
  w.key("remainder_exponent").value(res.remainder_exponent);
  w.key("exponent_valid").value(res.exponent_valid);
  w.key("forcing_tail_bound").value(res.forcing_tail_bound);
  w.key("admissible_strict").value(res.admissible_strict);
  w.key("admissible_pn").value(res.admissible_pn);
  w.key("warnings").begin_array();
  for (const std::string& s : res.warnings) w.value(s);
  w.end_array();
  w.key("update_norms").begin_array();
  for (double v : res.update_norms) w.value(v);
  w.end_array();
  w.key("contraction_factors").begin_array();
  for (double v : res.contraction_factors) w.value(v);
  w.end_array();
  w.key("outgoing_fit");
  write_expansion_json(w, res.outgoing_fit);
  w.end_object();
  os << "\n";
}

void write_iterations_csv(std::ostream& os, const SolveResult& res) {
  os << "m,update_norm,contraction_factor\n";
  for (std::size_t m = 0; m < res.update_norms.size(); ++m) {
    os << m << "," << format_g17(res.update_norms[m]) << ",";
    if (m < res.contraction_factors.size())
      os << format_g17(res.contraction_factors[m]);
    os << "\n";
  }
}

void write_farfield_csv(std::ostream& os, const ExpansionFit& fit) {
  os << "r,remainder_hkm2\n";
  for (std::size_t i = 0; i < fit.radii.size(); ++i)
    os << format_g17(fit.radii[i]) << "," << format_g17(fit.remainder_norm[i])
       << "\n";
}

void write_trajectory_csv(std::ostream& os,
                          const std::vector<FlowResult>& trajectories) {
  os << "trajectory,t,x,y,nu,mu,p\n";
  for (std::size_t k = 0; k < trajectories.size(); ++k)
    for (const auto& row : trajectories[k].samples) {
      os << k;
      for (double v : row) os << "," << format_g17(v);
      os << "\n";
    }
}

void write_field_csv(std::ostream& os, const Field& u, int max_modes) {
  const RadialGrid& g = *u.grid;
  const int nm = std::min<int>(max_modes, (int)u.modes.size());
  os << "r";
  for (int m = 0; m < nm; ++m)
    os << ",re_mode" << u.modes[m].ell << ",im_mode" << u.modes[m].ell;
  os << "\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    os << format_g17(g.nodes[i]);
    for (int m = 0; m < nm; ++m)
      os << "," << format_g17(u.modes[m].values[i].real()) << ","
         << format_g17(u.modes[m].values[i].imag());
    os << "\n";
  }
}

}  // namespace nlhelm
