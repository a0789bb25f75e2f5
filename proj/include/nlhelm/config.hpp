// Run configuration: JSON schema (schema: 1) for the batch front-end.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlhelm/nonlinear.hpp"

namespace nlhelm {

struct DataSpec {
  enum class Kind { Random, Modes, SingleMode } kind = Kind::Random;
  std::uint64_t seed = 1;
  double hk_target = 0.05;
  std::vector<cplx> coeffs;  // Modes
  int ell = 0;               // SingleMode
  cplx value{1.0, 0.0};
};

struct FlowSpec {
  std::size_t seeds = 100;
  double T = 200.0;
  std::uint64_t seed = 7;
  double sample_dt = 0.25;
};

struct SweepSpec {
  std::string axis;  // "", "fnorm", "p", "lambda", "k", "L", "M"
  std::vector<double> values;
};

struct RunConfig {
  int schema = 1;
  SolverConfig solver;
  Nonlinearity nonlinearity = Nonlinearity::none();
  DataSpec data;
  FlowSpec flow;
  SweepSpec sweep;
  std::string out_dir = "out";
};

// Parses and validates; throws MismatchError / PreconditionError with a
// diagnostic for invalid configs.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

// Materialise the incoming data of a config (documented generator:
// splitmix64-seeded coefficients with H^k-balanced decay).
BoundaryData make_boundary_data(const RunConfig& cfg);

}  // namespace nlhelm
