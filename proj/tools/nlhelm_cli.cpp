// Batch front-end: linear runs, nonlinear solves, parameter sweeps,
// Hamilton-flow batches and the self-check suite.
//
// Exit codes: 0 success, 2 non-convergence, 3 precondition violation,
// 4 internal oracle failure.
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "nlhelm/acceptance.hpp"
#include "nlhelm/config.hpp"
#include "nlhelm/report.hpp"

namespace fs = std::filesystem;
using namespace nlhelm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoConverge = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitOracle = 4;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

bool g_dump_field = false;

RunConfig load(const CommonArgs& args) {
  RunConfig cfg = load_run_config(args.config_path);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.seed) cfg.data.seed = *args.seed;
  return cfg;
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  std::ofstream os(fs::path(cfg.out_dir) / name, std::ios::binary);
  if (!os) throw PreconditionError("cannot open output file " + name);
  return os;
}

int cmd_linear(const CommonArgs& args) {
  const RunConfig cfg = load(args);
  const BoundaryData f = make_boundary_data(cfg);
  const SolverConfig& s = cfg.solver;
  const ModeTable table(make_solver_grid(s), s.dim_n, s.max_mode,
                        s.potential ? &*s.potential : nullptr);
  ExtractOptions ext = s.extract;
  ext.sobolev_k = s.sobolev_k;

  const Field u0 = poisson_apply(f, table);
  const SplitField sp = split_in_out(u0, table);
  const ExpansionFit in_fit = extract_limit(u0, -1, table, ext);
  const ExpansionFit out_fit = extract_limit(u0, +1, table, ext);

  double scale = 0.0;
  for (const auto& m : u0.modes)
    for (const auto& v : m.values) scale = std::max(scale, std::abs(v));
  const double recon = max_node_error(sp.incoming + sp.outgoing, u0);
  const double z_plus = hk_norm(extract_limit(sp.outgoing, -1, table, ext).leading, 0);
  const double z_minus = hk_norm(extract_limit(sp.incoming, +1, table, ext).leading, 0);

  {
    auto os = open_out(cfg, "result.json");
    write_linear_result_json(os, f, out_fit.leading, in_fit, out_fit,
                             s.sobolev_k, recon, z_plus, z_minus);
  }
  {
    auto os = open_out(cfg, "farfield.csv");
    write_farfield_csv(os, out_fit);
  }
  {
    auto os = open_out(cfg, "profiles.csv");
    write_field_csv(os, u0, 4);
  }
  if (g_dump_field) {
    auto os = open_out(cfg, "field.json");
    JsonWriter w(os);
    write_field_json(w, u0);
    os << "\n";
  }

  const double roundtrip =
      hk_norm(in_fit.leading - f, s.sobolev_k) / std::max(1e-300, hk_norm(f, s.sobolev_k));
  const double fnorm = hk_norm(f, s.sobolev_k);
  if (recon > 1e-12 * scale || (fnorm > 0 && roundtrip > 1e-7) ||
      z_plus > 1e-8 || z_minus > 1e-8) {
    std::cerr << "linear: internal oracle failure (roundtrip " << roundtrip
              << ", split " << recon << ", zero limits " << z_plus << ", "
              << z_minus << ")\n";
    return kExitOracle;
  }
  std::cout << "linear: wrote " << cfg.out_dir << " (roundtrip " << roundtrip
            << ")\n";
  return kExitOk;
}

int cmd_solve(const CommonArgs& args) {
  const RunConfig cfg = load(args);
  const BoundaryData f = make_boundary_data(cfg);
  SolveResult res;
  ScatteringReport rep;
  auto [b, report] = scattering_map(f, cfg.nonlinearity, cfg.solver, nullptr, &res);
  rep = report;
  {
    auto os = open_out(cfg, "result.json");
    write_solve_result_json(os, f, res, rep);
  }
  {
    auto os = open_out(cfg, "iterations.csv");
    write_iterations_csv(os, res);
  }
  {
    auto os = open_out(cfg, "farfield.csv");
    write_farfield_csv(os, res.outgoing_fit);
  }
  std::cout << "solve: " << res.status << " in " << res.iterates
            << " iterates; flux defect " << res.flux_defect << "\n";
  return res.converged ? kExitOk : kExitNoConverge;
}

int cmd_sweep(const CommonArgs& args) {
  const RunConfig cfg = load(args);
  std::vector<double> values = cfg.sweep.values;
  if (cfg.sweep.axis.empty() || values.empty()) values = {0.0};  // single run

  auto os = open_out(cfg, "sweep.csv");
  os << "axis,value,hk_f,hk_b,flux_defect,iterates,converged,"
        "contraction_last,remainder_exponent,pde_residual\n";
  bool all_converged = true;
  for (double v : values) {
    RunConfig run = cfg;
    if (cfg.sweep.axis == "fnorm")
      run.data.hk_target = v;
    else if (cfg.sweep.axis == "p") {
      const cplx c = cfg.nonlinearity.monomials.empty()
                         ? cplx(1.0, 0.0)
                         : cfg.nonlinearity.monomials[0].coeff;
      run.nonlinearity = Nonlinearity::gauge((int)v, c);
    } else if (cfg.sweep.axis == "lambda")
      run.solver.lambda = v;
    else if (cfg.sweep.axis == "k")
      run.solver.sobolev_k = (int)v;
    else if (cfg.sweep.axis == "L")
      run.solver.max_mode = (int)v;
    else if (cfg.sweep.axis == "M")
      run.solver.grid_nodes = (std::size_t)v;
    else if (!cfg.sweep.axis.empty())
      throw MismatchError("sweep: unknown axis '" + cfg.sweep.axis + "'");
    run.solver.extract.sobolev_k = run.solver.sobolev_k;

    const BoundaryData f = make_boundary_data(run);
    SolveResult res;
    auto [b, rep] = scattering_map(f, run.nonlinearity, run.solver, nullptr, &res);
    all_converged = all_converged && res.converged;
    os << cfg.sweep.axis << "," << format_g17(v) << "," << format_g17(rep.hk_f)
       << "," << format_g17(rep.hk_b) << "," << format_g17(res.flux_defect)
       << "," << res.iterates << "," << (res.converged ? 1 : 0) << ","
       << format_g17(res.contraction_factors.empty()
                         ? 0.0
                         : res.contraction_factors.back())
       << "," << format_g17(res.remainder_exponent) << ","
       << format_g17(res.pde_residual) << "\n";
  }
  std::cout << "sweep: wrote " << cfg.out_dir << "/sweep.csv\n";
  return all_converged ? kExitOk : kExitNoConverge;
}

int cmd_flow(const CommonArgs& args) {
  const RunConfig cfg = load(args);
  const SolverConfig& s = cfg.solver;
  FlowOptions fopt;
  fopt.dim_n = s.dim_n;
  fopt.sample_dt = cfg.flow.sample_dt;
  Rng rng(cfg.flow.seed);
  std::vector<FlowResult> rows;
  std::size_t misclassified = 0;
  for (std::size_t i = 0; i < cfg.flow.seeds; ++i) {
    PhasePoint pt;
    pt.x = 0.0;
    pt.y = (s.dim_n == 3) ? 0.3 + (kPi - 0.6) * rng.uniform()
                          : 2.0 * kPi * rng.uniform();
    const double nu0 = 0.95 * s.lambda * rng.sym();
    pt.nu = nu0;
    pt.mu = std::sqrt(s.lambda * s.lambda - nu0 * nu0) *
            (rng.uniform() < 0.5 ? -1.0 : 1.0);
    const FlowResult fwd = flow(pt, s.lambda, cfg.flow.T / s.lambda, fopt);
    const FlowResult bwd = flow(pt, s.lambda, -cfg.flow.T / s.lambda, fopt);
    if (fwd.limit != RadialLimit::RPlus || bwd.limit != RadialLimit::RMinus)
      ++misclassified;
    rows.push_back(fwd);
    rows.push_back(bwd);
  }
  {
    auto os = open_out(cfg, "trajectory.csv");
    write_trajectory_csv(os, rows);
  }
  std::cout << "flow: " << cfg.flow.seeds << " seeds, " << misclassified
            << " misclassified\n";
  return misclassified == 0 ? kExitOk : kExitOracle;
}

int cmd_selfcheck() {
  AcceptanceOptions opt;
  opt.log = &std::cout;
  const auto results = run_acceptance(opt);
  return all_passed(results) ? kExitOk : kExitOracle;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlinear Helmholtz scattering solver"};
  app.require_subcommand(1);
  CommonArgs args;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config)
      sub->add_option("--config", args.config_path, "JSON run configuration")
          ->required();
    sub->add_option("--out", args.out_dir, "output directory override");
    std::uint64_t* seed_slot = nullptr;
    (void)seed_slot;
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t v) { args.seed = v; },
        "seed override for random data");
  };

  auto* linear = app.add_subcommand("linear", "free/potential linear run");
  add_common(linear, true);
  linear->add_flag("--dump-field", g_dump_field,
                   "also write the full radial field as field.json");
  auto* solve = app.add_subcommand("solve", "nonlinear scattering solve");
  add_common(solve, true);
  auto* sweep = app.add_subcommand("sweep", "parameter sweep");
  add_common(sweep, true);
  auto* flw = app.add_subcommand("flow", "Hamilton flow batch");
  add_common(flw, true);
  app.add_subcommand("selfcheck", "run the acceptance suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (linear->parsed()) return cmd_linear(args);
    if (solve->parsed()) return cmd_solve(args);
    if (sweep->parsed()) return cmd_sweep(args);
    if (flw->parsed()) return cmd_flow(args);
    return cmd_selfcheck();
  } catch (const MismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitOracle;
  }
}
