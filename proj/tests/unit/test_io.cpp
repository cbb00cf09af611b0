#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nematic/errors.hpp"
#include "nematic/io.hpp"

using namespace nematic;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("nematic_io_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

RunLog sample_log() {
  RunLog log;
  for (int l = 0; l < 3; ++l) {
    LevelRecord r;
    r.level = l;
    r.cells_per_side = 4 << l;
    r.newton_iters = l == 0 ? 34 : 1;
    r.initial_residual = 1.714 / (l + 1);
    r.final_residual = 9.1234567e-4 / (l + 1);
    r.min_dev = -1.25e-6 * (l + 1);
    r.max_dev = 2.26e-5;
    r.energy = 1.4804;
    r.nnz = 1000LL << (2 * l);
    r.converged = true;
    log.levels.push_back(r);
  }
  log.finalize();
  return log;
}

std::size_t position(const std::string& text, const std::string& word) {
  const auto p = text.find(word);
  EXPECT_NE(p, std::string::npos) << word;
  return p;
}

}  // namespace

TEST(Config, EmptyTextGivesDefaults) {
  const Config c = parse_config("");
  EXPECT_EQ(c.problem, ProblemKind::Uniform);
  EXPECT_EQ(c.coarse_n, 4);
  EXPECT_EQ(c.levels, 6);
  EXPECT_DOUBLE_EQ(c.newton.tol, 1e-3);
  EXPECT_DOUBLE_EQ(c.newton.omega0, 0.2);
  EXPECT_DOUBLE_EQ(c.newton.omega_step, 0.2);
  EXPECT_DOUBLE_EQ(c.newton.omega_max, 1.0);
  EXPECT_EQ(c.newton.quadrature_order, 3);
  EXPECT_DOUBLE_EQ(c.K1, 1.0);
  EXPECT_DOUBLE_EQ(c.K2, 1.0);
  EXPECT_DOUBLE_EQ(c.K3, 1.0);
  EXPECT_EQ(c.output_dir, ".");
}

TEST(Config, ProblemSelectsItsConstants) {
  const Config t = parse_config("problem = twist\n");
  EXPECT_EQ(t.problem, ProblemKind::Twist);
  EXPECT_DOUBLE_EQ(t.K2, 1.2);
  const ProblemSpec spec = make_problem(t);
  EXPECT_EQ(spec.name, "twist");
  EXPECT_EQ(spec.coarse_n, 4);
  EXPECT_EQ(spec.levels, 6);
  EXPECT_TRUE(spec.exact.has_value());
  const Config n = parse_config("problem = nano");
  EXPECT_DOUBLE_EQ(n.K2, 0.62903);
  EXPECT_DOUBLE_EQ(n.K3, 1.32258);
}

TEST(Config, FullFileWithComments) {
  const Config c = parse_config(
      "# twist run\n"
      "problem = twist   # with comment\n"
      "\n"
      "  K2 = 1.5\n"
      "coarse_n=2\n"
      "levels = 3\n"
      "tol = 1e-6\n"
      "omega0 = 0.5\n"
      "omega_step = 0.25\n"
      "omega_max = 0.9\n"
      "max_iters = 40\n"
      "quad_order = 4\n"
      "seed = 12\n"
      "perturbation = 0.1\n"
      "output_dir = out/run1\n");
  EXPECT_DOUBLE_EQ(c.K1, 1.0);
  EXPECT_DOUBLE_EQ(c.K2, 1.5);
  EXPECT_EQ(c.coarse_n, 2);
  EXPECT_EQ(c.levels, 3);
  EXPECT_DOUBLE_EQ(c.newton.tol, 1e-6);
  EXPECT_DOUBLE_EQ(c.newton.omega0, 0.5);
  EXPECT_DOUBLE_EQ(c.newton.omega_step, 0.25);
  EXPECT_DOUBLE_EQ(c.newton.omega_max, 0.9);
  EXPECT_EQ(c.newton.max_iters, 40);
  EXPECT_EQ(c.newton.quadrature_order, 4);
  EXPECT_EQ(c.seed, 12u);
  EXPECT_DOUBLE_EQ(c.perturbation, 0.1);
  EXPECT_EQ(c.output_dir, "out/run1");
  const ProblemSpec spec = make_problem(c);
  EXPECT_DOUBLE_EQ(spec.material.K2, 1.5);
  EXPECT_FALSE(spec.exact.has_value());
  const GuessOptions g = guess_options(c);
  EXPECT_EQ(g.seed, 12u);
  EXPECT_DOUBLE_EQ(g.perturbation, 0.1);
}

TEST(Config, CustomAnchoring) {
  const Config c = parse_config("problem = custom\nK2 = 0.5\nbc_lower = 2, 0, 0\nbc_upper = 0 0 3\n");
  const ProblemSpec spec = make_problem(c);
  EXPECT_EQ(spec.name, "custom");
  EXPECT_NEAR((spec.bc_lower(0.2) - Vec3(1, 0, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((spec.bc_upper(0.2) - Vec3(0, 0, 1)).norm(), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(spec.material.K2, 0.5);
}

TEST(Config, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("tol = -1"), 1);
  EXPECT_EQ(error_line("problem = twist\n\nbogus = 3\n"), 3);
  EXPECT_EQ(error_line("levels = 3\nlevels = 4\n"), 2);
  EXPECT_EQ(error_line("K1 = abc"), 1);
  EXPECT_EQ(error_line("K1 = 0"), 1);
  EXPECT_EQ(error_line("coarse_n = 2.5"), 1);
  EXPECT_EQ(error_line("coarse_n = 0"), 1);
  EXPECT_EQ(error_line("levels = 11"), 1);
  EXPECT_EQ(error_line("omega0 = 1.5"), 1);
  EXPECT_EQ(error_line("omega_step = -0.1"), 1);
  EXPECT_EQ(error_line("quad_order = 7"), 1);
  EXPECT_EQ(error_line("seed = -2"), 1);
  EXPECT_EQ(error_line("perturbation = 0.5"), 1);
  EXPECT_EQ(error_line("problem = cholesteric"), 1);
  EXPECT_EQ(error_line("just words"), 1);
  EXPECT_EQ(error_line("= 3"), 1);
  EXPECT_EQ(error_line("tol = nan"), 1);
  EXPECT_EQ(error_line("bc_lower = 1, 0"), 1);
  EXPECT_EQ(error_line("problem = custom\nbc_upper = 0, 0, 0"), 2);
  EXPECT_EQ(error_line("omega_max = 0.3\nomega0 = 0.5\n"), 2);
  EXPECT_EQ(error_line("coarse_n = 64\nlevels = 6\n"), 2);
  EXPECT_EQ(error_line("problem = twist\nbc_lower = 1 0 0\n"), 2);
  EXPECT_EQ(error_line("tol = 1e-3\n"), -1);
}

TEST(Config, LoadFromFile) {
  const fs::path d = scratch_dir("cfg");
  {
    std::ofstream(d / "run.cfg") << "problem = nano\nlevels = 2\n";
  }
  const Config c = load_config(d / "run.cfg");
  EXPECT_EQ(c.problem, ProblemKind::Nano);
  EXPECT_EQ(c.levels, 2);
  EXPECT_THROW(load_config(d / "missing.cfg"), ConfigError);
  EXPECT_STREQ(to_string(ProblemKind::Custom), "custom");
}

TEST(RunLogCsv, FormatAndRoundTrip) {
  const RunLog log = sample_log();
  const std::string text = format_runlog_csv(log);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "level,grid,newton_iters,initial_residual,final_residual,min_dev,max_dev,energy");
  std::getline(in, line);
  EXPECT_EQ(line, "0,4x4,34,1.714000e+00,9.123457e-04,-1.250000e-06,2.260000e-05,1.480e+00");
  std::string last;
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
  }
  EXPECT_EQ(rows, 3);
  EXPECT_EQ(last.rfind("work_units,", 0), 0u);

  const RunLog back = parse_runlog_csv(text);
  ASSERT_EQ(back.levels.size(), 3u);
  for (std::size_t l = 0; l < 3; ++l) {
    const LevelRecord& a = log.levels[l];
    const LevelRecord& b = back.levels[l];
    EXPECT_EQ(b.level, a.level);
    EXPECT_EQ(b.cells_per_side, a.cells_per_side);
    EXPECT_EQ(b.newton_iters, a.newton_iters);
    EXPECT_NEAR(b.initial_residual, a.initial_residual, 5e-7 * a.initial_residual);
    EXPECT_NEAR(b.final_residual, a.final_residual, 5e-7 * a.final_residual);
    EXPECT_NEAR(b.min_dev, a.min_dev, 5e-7 * std::abs(a.min_dev));
    EXPECT_NEAR(b.energy, a.energy, 5e-4 * a.energy);
  }
  EXPECT_NEAR(back.work_units, log.work_units, 1e-6 * log.work_units);
  EXPECT_EQ(format_runlog_csv(back).substr(0, 60), text.substr(0, 60));
}

TEST(RunLogCsv, EmptyLogIsHeaderOnly) {
  EXPECT_EQ(format_runlog_csv(RunLog{}),
            "level,grid,newton_iters,initial_residual,final_residual,min_dev,max_dev,energy\n");
  EXPECT_TRUE(parse_runlog_csv(format_runlog_csv(RunLog{})).levels.empty());
}

TEST(RunLogCsv, FileRoundTripAndErrors) {
  const fs::path d = scratch_dir("csv");
  write_runlog_csv(sample_log(), d / "runlog.csv");
  EXPECT_EQ(read_runlog_csv(d / "runlog.csv").levels.size(), 3u);
  EXPECT_THROW(write_runlog_csv(sample_log(), d / "no" / "such" / "dir.csv"), IoError);
  EXPECT_THROW(read_runlog_csv(d / "absent.csv"), IoError);
  EXPECT_THROW(parse_runlog_csv("level,grid\n"), IoError);
  EXPECT_THROW(parse_runlog_csv(format_runlog_csv(RunLog{}) + "0,4x4,3\n"), IoError);
  EXPECT_THROW(parse_runlog_csv(format_runlog_csv(RunLog{}) + "0,4x4,x,1,1,1,1,1\n"), IoError);
}

TEST(RunLogCsv, IdenticalRunsGiveIdenticalBytes) {
  ProblemSpec spec = problem_twist();
  spec.levels = 3;
  SolveOptions o;
  o.guess = {0.3, 4};
  const std::string a = format_runlog_csv(solve_problem(spec, NewtonConfig{}, o).log);
  const std::string b = format_runlog_csv(solve_problem(spec, NewtonConfig{}, o).log);
  EXPECT_EQ(a, b);
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 5);
}

TEST(Vtk, SingleCellLayout) {
  const ProblemSpec p = problem_uniform();
  const NematicState s = make_initial_state(p, make_discretization(build_uniform(1, true)), {0.0, 0});
  const std::string text = format_vtk(s);
  EXPECT_EQ(text.rfind("# vtk DataFile Version 3.0\n", 0), 0u);
  EXPECT_NE(text.find("POINTS 4 double\n"), std::string::npos);
  EXPECT_NE(text.find("CELLS 1 5\n4 0 1 3 2\n"), std::string::npos);
  EXPECT_NE(text.find("CELL_TYPES 1\n9\n"), std::string::npos);
  const auto vec = text.find("VECTORS director double\n");
  ASSERT_NE(vec, std::string::npos);
  std::istringstream in(text.substr(vec + 24));
  for (int k = 0; k < 4; ++k) {
    double x, y, z;
    in >> x >> y >> z;
    EXPECT_EQ(x, 1.0);
    EXPECT_EQ(y, 0.0);
    EXPECT_EQ(z, 0.0);
  }
  std::string next;
  in >> next;
  EXPECT_EQ(next, "CELL_DATA");
}

TEST(Vtk, SectionOrder) {
  const NematicState s = make_initial_state(problem_nano(), make_discretization(build_uniform(4, true)));
  const std::string text = format_vtk(s);
  const std::size_t p = position(text, "\nPOINTS "), c = position(text, "\nCELLS "),
                    t = position(text, "\nCELL_TYPES "), pd = position(text, "\nPOINT_DATA "),
                    cd = position(text, "\nCELL_DATA "), f = position(text, "\nFIELD ");
  EXPECT_LT(p, c);
  EXPECT_LT(c, t);
  EXPECT_LT(t, pd);
  EXPECT_LT(pd, cd);
  EXPECT_LT(cd, f);
  EXPECT_NE(text.find("POINTS 25 double"), std::string::npos);
  EXPECT_NE(text.find("SCALARS lambda double 1\nLOOKUP_TABLE default\n"), std::string::npos);
  EXPECT_NE(text.find("director_q2 27 16 double"), std::string::npos);
}

TEST(Vtk, RoundTripRestoresField) {
  ProblemSpec spec = problem_twist();
  spec.levels = 2;
  const SolveResult r = solve_problem(spec, NewtonConfig{});
  const fs::path d = scratch_dir("vtk");
  write_vtk(r.state, d / "solution.vtk");
  const NematicState back = read_vtk(d / "solution.vtk");
  EXPECT_EQ(back.mesh().cells_per_side(), 8);
  EXPECT_TRUE(back.mesh().periodic_x());
  EXPECT_EQ(back.material.K2, 1.2);
  EXPECT_EQ(back.director.values, r.state.director.values);
  EXPECT_EQ(back.lambda.values, r.state.lambda.values);
  EXPECT_EQ(evaluate_energy(back), evaluate_energy(r.state));
}

TEST(Vtk, MalformedInput) {
  EXPECT_THROW(parse_vtk(""), IoError);
  EXPECT_THROW(parse_vtk("# vtk DataFile Version 3.0\nsomething else\n"), IoError);
  const NematicState s = make_initial_state(problem_uniform(), make_discretization(build_uniform(2, true)));
  const std::string text = format_vtk(s);
  EXPECT_THROW(parse_vtk(text.substr(0, text.size() / 2)), IoError);
  EXPECT_THROW(read_vtk("/nonexistent/solution.vtk"), IoError);
}

TEST(MatrixMarket, CoordinateFormat) {
  Eigen::SparseMatrix<double> m(3, 2);
  m.insert(0, 0) = 1.5;
  m.insert(2, 1) = -0.125;
  m.insert(1, 0) = 1.0 / 3.0;
  m.makeCompressed();
  const std::string text = format_matrix_market(m);
  EXPECT_EQ(text,
            "%%MatrixMarket matrix coordinate real general\n"
            "3 2 3\n"
            "1 1 1.5\n"
            "2 1 0.33333333333333331\n"
            "3 2 -0.125\n");
  const fs::path d = scratch_dir("mm");
  write_matrix_market(m, d / "a.mtx");
  std::ifstream in(d / "a.mtx");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), text);
}
