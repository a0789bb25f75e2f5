// Deterministic result writers: JSON with 17-significant-digit numbers and
// fixed key order, plus plot-ready CSV tables.  Identical config + seed
// must give byte-identical files, so no library float formatting is used.
#pragma once

#include <ostream>
#include <string>

#include "nlhelm/hamflow.hpp"
#include "nlhelm/nonlinear.hpp"

namespace nlhelm {

std::string format_g17(double v);

class JsonWriter {
 public:
  explicit JsonWriter(std::ostream& os) : os_(os) {}
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(std::size_t v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const cplx& v);  // [re, im]

 private:
  void sep();
  std::ostream& os_;
  std::string stack_;  // 'o' / 'a' nesting
  bool pending_key_ = false;
  std::string first_;  // first-element flags per level
};

void write_boundary_json(JsonWriter& w, const BoundaryData& f);
void write_expansion_json(JsonWriter& w, const ExpansionFit& fit);
void write_field_json(JsonWriter& w, const Field& u);

// result.json bodies
void write_linear_result_json(std::ostream& os, const BoundaryData& f,
                              const BoundaryData& b0, const ExpansionFit& in_fit,
                              const ExpansionFit& out_fit, int sobolev_k,
                              double split_error, double zero_limit_plus,
                              double zero_limit_minus);
void write_solve_result_json(std::ostream& os, const BoundaryData& f,
                             const SolveResult& res, const ScatteringReport& rep);

// CSV tables
void write_iterations_csv(std::ostream& os, const SolveResult& res);
void write_farfield_csv(std::ostream& os, const ExpansionFit& fit);
void write_trajectory_csv(std::ostream& os,
                          const std::vector<FlowResult>& trajectories);
void write_field_csv(std::ostream& os, const Field& u, int max_modes);

}  // namespace nlhelm
