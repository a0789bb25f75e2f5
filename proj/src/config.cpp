#include "nlhelm/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace nlhelm {

namespace {
using nlohmann::json;

double num_or(const json& j, const char* key, double def) {
  return j.contains(key) ? j.at(key).get<double>() : def;
}
std::int64_t int_or(const json& j, const char* key, std::int64_t def) {
  return j.contains(key) ? j.at(key).get<std::int64_t>() : def;
}
}  // namespace

RunConfig parse_run_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw MismatchError(std::string("config: invalid JSON: ") + e.what());
  }
  if (int_or(j, "schema", 0) != 1)
    throw MismatchError("config: missing or unsupported schema (expected 1)");

  RunConfig cfg;
  SolverConfig& s = cfg.solver;
  s.dim_n = (int)int_or(j, "dim_n", 3);
  s.lambda = num_or(j, "lambda", 1.0);
  s.max_mode = (int)int_or(j, "L", 16);
  s.sobolev_k = (int)int_or(j, "k", 2);
  if (s.dim_n != 2 && s.dim_n != 3)
    throw MismatchError("config: dim_n must be 2 or 3");
  if (!(s.lambda > 0.0)) throw MismatchError("config: lambda must be positive");
  if (s.max_mode < 0) throw MismatchError("config: L must be >= 0");

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    s.r_min = num_or(g, "r_min", s.r_min);
    s.r_match = num_or(g, "r_match", 0.0);
    s.r_max = num_or(g, "r_max", 0.0);
    s.grid_nodes = (std::size_t)int_or(g, "nodes", (std::int64_t)s.grid_nodes);
    s.panel_order = (int)int_or(g, "panel_order", s.panel_order);
  }
  if (j.contains("solver")) {
    const json& t = j.at("solver");
    s.tol = num_or(t, "tol", s.tol);
    s.delta = num_or(t, "delta", s.delta);
    s.max_iter = (int)int_or(t, "max_iter", s.max_iter);
    s.dealias_factor = num_or(t, "dealias_factor", s.dealias_factor);
    s.max_data_norm = num_or(t, "max_data_norm", s.max_data_norm);
    s.accept_residual = num_or(t, "accept_residual", s.accept_residual);
  }
  if (j.contains("extract")) {
    const json& e = j.at("extract");
    s.extract.num_radii = (int)int_or(e, "num_radii", s.extract.num_radii);
    s.extract.terms = (int)int_or(e, "terms", s.extract.terms);
  }
  s.extract.sobolev_k = s.sobolev_k;

  if (j.contains("nonlinearity")) {
    const json& n = j.at("nonlinearity");
    cfg.nonlinearity.p = (int)int_or(n, "p", 3);
    cfg.nonlinearity.monomials.clear();
    if (n.contains("monomials")) {
      for (const auto& m : n.at("monomials")) {
        Monomial mo;
        mo.coeff = cplx(num_or(m, "c_re", 0.0), num_or(m, "c_im", 0.0));
        mo.a = (int)int_or(m, "a", 0);
        mo.b = (int)int_or(m, "b", 0);
        cfg.nonlinearity.monomials.push_back(mo);
      }
    }
    cfg.nonlinearity.validate();
  }

  if (j.contains("potential")) {
    const json& p = j.at("potential");
    const std::string kind = p.contains("kind") ? p.at("kind").get<std::string>() : "none";
    if (kind == "none") {
    } else if (kind == "exp") {
      s.potential = exp_potential(num_or(p, "amplitude", 1.0), num_or(p, "rate", 1.0));
    } else if (kind == "power") {
      s.potential = powerlaw_potential(num_or(p, "amplitude", 1.0), num_or(p, "gamma", 1.5));
    } else if (kind == "inverse_square") {
      s.potential = inverse_square_potential(num_or(p, "c", 1.0));
    } else {
      throw MismatchError("config: unknown potential kind '" + kind + "'");
    }
  }

  if (j.contains("data")) {
    const json& d = j.at("data");
    const std::string kind = d.contains("kind") ? d.at("kind").get<std::string>() : "random";
    if (kind == "random") {
      cfg.data.kind = DataSpec::Kind::Random;
      cfg.data.seed = (std::uint64_t)int_or(d, "seed", 1);
      cfg.data.hk_target = num_or(d, "hk_norm", 0.05);
    } else if (kind == "modes") {
      cfg.data.kind = DataSpec::Kind::Modes;
      for (const auto& c : d.at("coeffs"))
        cfg.data.coeffs.push_back(cplx(c.at(0).get<double>(), c.at(1).get<double>()));
    } else if (kind == "single_mode") {
      cfg.data.kind = DataSpec::Kind::SingleMode;
      cfg.data.ell = (int)int_or(d, "ell", 0);
      cfg.data.value = cplx(num_or(d, "re", 1.0), num_or(d, "im", 0.0));
    } else {
      throw MismatchError("config: unknown data kind '" + kind + "'");
    }
  }

  if (j.contains("flow")) {
    const json& f = j.at("flow");
    cfg.flow.seeds = (std::size_t)int_or(f, "seeds", 100);
    cfg.flow.T = num_or(f, "T", 200.0);
    cfg.flow.seed = (std::uint64_t)int_or(f, "seed", 7);
    cfg.flow.sample_dt = num_or(f, "sample_dt", 0.25);
  }

  if (j.contains("sweep")) {
    const json& w = j.at("sweep");
    cfg.sweep.axis = w.contains("axis") ? w.at("axis").get<std::string>() : "";
    if (w.contains("values"))
      for (const auto& v : w.at("values")) cfg.sweep.values.push_back(v.get<double>());
  }
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MismatchError("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

BoundaryData make_boundary_data(const RunConfig& cfg) {
  const SolverConfig& s = cfg.solver;
  switch (cfg.data.kind) {
    case DataSpec::Kind::Random: {
      Rng rng(cfg.data.seed);
      return random_boundary_data(s.dim_n, s.max_mode, s.sobolev_k,
                                  cfg.data.hk_target, rng);
    }
    case DataSpec::Kind::Modes: {
      BoundaryData f = BoundaryData::zeros(s.dim_n, s.max_mode);
      if (cfg.data.coeffs.size() != f.coeffs.size())
        throw MismatchError("config: coefficient count does not match (dim_n, L)");
      f.coeffs = cfg.data.coeffs;
      return f;
    }
    case DataSpec::Kind::SingleMode: {
      BoundaryData f = BoundaryData::zeros(s.dim_n, s.max_mode);
      f.at(cfg.data.ell) = cfg.data.value;
      return f;
    }
  }
  throw MismatchError("config: bad data spec");
}

}  // namespace nlhelm
