#include "nematic_cli/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "nematic/analysis.hpp"
#include "nematic/assembly.hpp"
#include "nematic/errors.hpp"
#include "nematic/io.hpp"
#include "nematic/problems.hpp"
#include "nematic/solver.hpp"

namespace nematic::cli {

namespace {

namespace fs = std::filesystem;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void print_level(std::ostream& out, const LevelRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%5d %9s %6d %12.3e %12.3e %11.2e %11.2e %#11.4g\n", r.level,
                (std::to_string(r.cells_per_side) + "x" + std::to_string(r.cells_per_side)).c_str(),
                r.newton_iters, r.initial_residual, r.final_residual, r.min_dev, r.max_dev,
                r.energy);
  out << buf << std::flush;
}

Config config_or_default(const std::string& path) {
  return path.empty() ? Config{} : load_config(path);
}

fs::path prepare_output_dir(const Config& cfg, const std::string& override_dir) {
  fs::path dir = override_dir.empty() ? fs::path(cfg.output_dir) : fs::path(override_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

// ---------------------------------------------------------------------------

struct SolveArgs {
  std::string config;
  std::string output_dir;
  std::string dump_matrix;
  bool no_ni = false;
  bool quiet = false;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const Config cfg = load_config(a.config);
  const ProblemSpec spec = make_problem(cfg);
  const fs::path dir = prepare_output_dir(cfg, a.output_dir);

  if (!a.dump_matrix.empty()) {
    const NematicState s0 = make_initial_state(
        spec, make_discretization(build_uniform(spec.coarse_n, spec.periodic_x)),
        guess_options(cfg));
    const SaddleSystem sys = assemble(s0, gauss_rule(cfg.newton.quadrature_order));
    write_matrix_market(sys.block_matrix(), a.dump_matrix);
  }

  SolveOptions opts;
  opts.nested = !a.no_ni;
  opts.guess = guess_options(cfg);
  if (!a.quiet) {
    out << "problem " << to_string(cfg.problem) << (a.no_ni ? " (single grid)" : " (nested iteration)")
        << ", K = (" << cfg.K1 << ", " << cfg.K2 << ", " << cfg.K3 << ")\n";
    out << "level      grid  iters   init. res.   final res.     min dev     max dev      energy\n";
    opts.on_level = [&](const LevelRecord& r) { print_level(out, r); };
  }

  const SolveResult res = solve_problem(spec, cfg.newton, opts);
  write_runlog_csv(res.log, dir / "runlog.csv");
  write_vtk(res.state, dir / "solution.vtk");

  const LevelRecord& last = res.log.levels.back();
  out << "work_units " << fmt("%.3f", res.log.work_units) << '\n';
  out << "final energy " << fmt("%#.4g", last.energy) << '\n';
  out << "wrote " << (dir / "runlog.csv").string() << ", " << (dir / "solution.vtk").string()
      << '\n';
  for (const auto& r : res.log.levels) {
    if (!r.converged) {
      out << "level " << r.level << " stopped at max_iters with residual "
          << fmt("%.3e", r.final_residual) << '\n';
      return kSolverFailure;
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct Probe {
  std::string name;
  double value;
  double limit;
  bool pass;
};

NematicState random_state(const ProblemSpec& spec, int n, double perturbation, std::uint64_t seed) {
  NematicState s = make_initial_state(spec, make_discretization(build_uniform(n, spec.periodic_x)),
                                      GuessOptions{perturbation, seed});
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Eigen::Index i = 0; i < s.lambda.values.size(); ++i) s.lambda.values[i] = u(rng);
  return s;
}

int cmd_verify(const std::string& config, const std::string& output_dir, int states,
               std::ostream& out) {
  const Config cfg = config_or_default(config);
  const ProblemSpec spec = make_problem(cfg);
  const fs::path dir = prepare_output_dir(cfg, output_dir);
  std::vector<Probe> probes;
  auto add = [&](std::string name, double value, double limit, bool pass) {
    probes.push_back({std::move(name), value, limit, pass});
  };

  const double pert = cfg.perturbation > 0.0 ? cfg.perturbation : 0.3;
  for (int k = 0; k < states; ++k) {
    const NematicState s = random_state(spec, 4, pert, cfg.seed + static_cast<std::uint64_t>(k));
    const FdCheck fd = fd_check(s, 1e-6, cfg.newton.quadrature_order);
    add("fd_residual_state" + std::to_string(k), fd.residual_err, 1e-6, fd.residual_err <= 1e-6);
    add("fd_hessian_state" + std::to_string(k), fd.hessian_err, 1e-5, fd.hessian_err <= 1e-5);
    AssemblyOptions raw;
    raw.apply_constraints = false;
    const double asym = assemble(s, gauss_rule(cfg.newton.quadrature_order), raw).A.relative_asymmetry();
    add("a_symmetry_state" + std::to_string(k), asym, 1e-12, asym <= 1e-12);
  }

  const UspdBounds b1 = uspd_bounds(1.0, 1.0, 1.2);
  add("uspd_kappa1.2_beta1_Lambda", b1.Lambda, 1.2, b1.uspd && std::abs(b1.Lambda - 1.2) < 1e-15);
  const UspdBounds b2 = uspd_bounds(1.0, 3.0, 1.0);
  add("uspd_kappa1_eta", b2.eta, 1.0, b2.uspd && b2.eta == 1.0 && b2.Lambda == 1.0);
  const UspdBounds b3 = uspd_bounds(1.0, 1.5, 0.5);
  add("uspd_kappa0.5_beta1.5", b3.eta, 0.25, b3.uspd && std::abs(b3.eta - 0.25) < 1e-15);
  const UspdBounds b4 = uspd_bounds(1.0, 2.5, 0.5);
  add("uspd_kappa0.5_beta2.5_not_uspd", b4.eta, 0.0, !b4.uspd);

  add("bubble_constant_2d", bubble_constant(2), 2.25, bubble_constant(2) == 2.25);
  add("bubble_constant_3d", bubble_constant(3), 3.375, bubble_constant(3) == 3.375);
  const double sup = normalized_bubble_sup(0.0, 0.0, 2.0, 1.0);
  add("bubble_numeric_2x1", sup, 1.125, std::abs(sup - 1.125) <= 1e-6);

  GuessOptions flat;
  flat.perturbation = 0.0;
  const NematicState c4 =
      make_initial_state(problem_uniform(), make_discretization(build_uniform(4, true)), flat);
  const double coer = probe_coercivity(c4);
  add("coercivity_kappa1_constant", coer, 0.0, coer > 0.0);
  const double z4 = estimate_infsup(c4).zeta_h;
  add("infsup_q2p0_4x4", z4, 1e-8, z4 > 1e-8);
  const NematicState q1 = make_initial_state(
      problem_uniform(),
      make_discretization(build_uniform(2, true), LagrangeDegree::Q1, MultiplierElement::Q1), flat);
  const double zq1 = estimate_infsup(q1).zeta_h;
  add("infsup_q1q1_2x2_singular", zq1, 1e-10, zq1 <= 1e-10);

  std::ostringstream csv;
  csv << "probe,value,limit,pass\n";
  bool all = true;
  for (const auto& p : probes) {
    all = all && p.pass;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-34s %12.4e  (limit %.3e)  %s\n", p.name.c_str(), p.value,
                  p.limit, p.pass ? "PASS" : "FAIL");
    out << buf;
    std::snprintf(buf, sizeof buf, "%s,%.6e,%.6e,%d\n", p.name.c_str(), p.value, p.limit,
                  p.pass ? 1 : 0);
    csv << buf;
  }
  std::ofstream f(dir / "verify.csv", std::ios::binary);
  if (!(f << csv.str())) throw IoError("cannot write " + (dir / "verify.csv").string());
  out << (all ? "all probes passed" : "some probes failed") << '\n';
  return all ? kOk : kSolverFailure;
}

// ---------------------------------------------------------------------------

int cmd_infsup(const std::string& config, const std::string& output_dir, int levels,
               std::ostream& out) {
  if (levels < 1 || levels > 3) throw ConfigError(0, "--levels must lie in 1..3 (dense probes stop at 16x16)");
  Config cfg = config_or_default(config);
  cfg.levels = levels;
  if (cfg.coarse_n << (levels - 1) > 16) {
    throw ConfigError(0, "finest probe grid would exceed 16 x 16; lower coarse_n or --levels");
  }
  const ProblemSpec spec = make_problem(cfg);
  const fs::path dir = prepare_output_dir(cfg, output_dir);

  SolveOptions opts;
  opts.keep_levels = true;
  opts.guess = guess_options(cfg);
  const SolveResult res = solve_problem(spec, cfg.newton, opts);

  std::ostringstream csv;
  csv << "pair,grid,h,zeta_h,zeta_over_h,ratio_to_previous\n";
  out << "pair    grid        h       zeta_h  zeta_h / h   ratio\n";
  double prev = 0.0;
  char buf[256];
  for (const auto& s : res.level_states) {
    const InfSupEstimate e = estimate_infsup(s, cfg.newton.quadrature_order);
    const double h = s.mesh().h();
    const double ratio = prev > 0.0 ? prev / e.zeta_h : 0.0;
    std::snprintf(buf, sizeof buf, "Q2-P0 %3dx%-3d %8.5f %12.4e %11.4e %7.3f\n", e.cells_per_side,
                  e.cells_per_side, h, e.zeta_h, e.zeta_h / h, ratio);
    out << buf;
    std::snprintf(buf, sizeof buf, "Q2-P0,%dx%d,%.6e,%.6e,%.6e,%.6e\n", e.cells_per_side,
                  e.cells_per_side, h, e.zeta_h, e.zeta_h / h, ratio);
    csv << buf;
    prev = e.zeta_h;
  }
  GuessOptions flat;
  flat.perturbation = 0.0;
  const NematicState q1 = make_initial_state(
      spec, make_discretization(build_uniform(2, spec.periodic_x), LagrangeDegree::Q1, MultiplierElement::Q1),
      flat);
  const double zq1 = estimate_infsup(q1, cfg.newton.quadrature_order).zeta_h;
  std::snprintf(buf, sizeof buf, "Q1-Q1   2x2   %8.5f %12.4e\n", 0.5, zq1);
  out << buf;
  std::snprintf(buf, sizeof buf, "Q1-Q1,2x2,%.6e,%.6e,,\n", 0.5, zq1);
  csv << buf;

  std::ofstream f(dir / "infsup.csv", std::ios::binary);
  if (!(f << csv.str())) throw IoError("cannot write " + (dir / "infsup.csv").string());
  return kOk;
}

// ---------------------------------------------------------------------------

int cmd_energy(const std::string& vtk, int qorder, std::ostream& out) {
  NematicState s;
  try {
    s = read_vtk(vtk);
  } catch (const IoError& e) {
    throw ConfigError(0, e.what());
  }
  const double e = evaluate_energy(s, qorder);
  const LengthDeviation d = length_deviation(s, qorder);
  char buf[256];
  std::snprintf(buf, sizeof buf, "energy %#.4g\nenergy_full %.17g\nmin_dev %.3e\nmax_dev %.3e\n", e, e,
                d.min, d.max);
  out << buf;
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frank-Oseen nematic equilibria: mixed Q2-P0 Newton solver with nested iteration"};
  app.name(argv.empty() ? "nematic" : fs::path(argv[0]).filename().string());
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve a benchmark problem");
  solve->add_option("--config", sa.config, "Configuration file")->required();
  solve->add_flag("--no-ni", sa.no_ni, "Single damped Newton solve on the finest grid");
  solve->add_option("--output-dir", sa.output_dir, "Overrides output_dir from the config");
  solve->add_option("--dump-matrix", sa.dump_matrix,
                    "Write the first coarse-grid Newton matrix (Matrix Market)");
  solve->add_flag("--quiet", sa.quiet, "Suppress the per-level table");

  std::string vconfig, vdir;
  int vstates = 5;
  auto* verify = app.add_subcommand("verify", "Finite-difference and theory probes");
  verify->add_option("--config", vconfig, "Configuration file (default: uniform)");
  verify->add_option("--output-dir", vdir, "Overrides output_dir from the config");
  verify->add_option("--states", vstates, "Random 4x4 states for the FD checks")
      ->check(CLI::Range(1, 100));

  std::string iconfig, idir;
  int ilevels = 3;
  auto* infsup = app.add_subcommand("infsup", "Discrete inf-sup estimates per level");
  infsup->add_option("--config", iconfig, "Configuration file (default: uniform)");
  infsup->add_option("--output-dir", idir, "Overrides output_dir from the config");
  infsup->add_option("--levels", ilevels, "Grids in the sweep (coarse_n, 2 coarse_n, ...)");

  std::string evtk;
  int eorder = 3;
  auto* energy = app.add_subcommand("energy", "Energy of a stored VTK field");
  energy->add_option("--vtk", evtk, "VTK file written by solve")->required();
  energy->add_option("--quad-order", eorder, "Gauss points per direction")->check(CLI::Range(1, 6));

  std::vector<const char*> cargv;
  for (const auto& a : argv) cargv.push_back(a.c_str());
  if (cargv.empty()) cargv.push_back("nematic");
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kConfigError;
  }

  try {
    if (*solve) return cmd_solve(sa, out);
    if (*verify) return cmd_verify(vconfig, vdir, vstates, out);
    if (*infsup) return cmd_infsup(iconfig, idir, ilevels, out);
    if (*energy) return cmd_energy(evtk, eorder, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SingularMatrixError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const DivergenceError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const NumericalError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  err << app.help();
  return kConfigError;
}

}  // namespace nematic::cli
