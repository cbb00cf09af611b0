#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <Eigen/SparseCore>

#include "nematic/problems.hpp"
#include "nematic/solver.hpp"

namespace nematic {

/// A file could not be opened, written or parsed.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

enum class ProblemKind { Uniform, Twist, Nano, Custom };

const char* to_string(ProblemKind kind) noexcept;

struct Config {
  ProblemKind problem = ProblemKind::Uniform;
  double K1 = 1.0;
  double K2 = 1.0;
  double K3 = 1.0;
  int coarse_n = 4;
  int levels = 6;
  NewtonConfig newton;
  std::uint64_t seed = 0;
  double perturbation = 0.3;
  std::string output_dir = ".";
  // problem = custom only
  Vec3 bc_lower = Vec3(1.0, 0.0, 0.0);
  Vec3 bc_upper = Vec3(1.0, 0.0, 0.0);
};

/// `key = value` lines, `#` starts a comment. Keys: problem, K1, K2, K3,
/// coarse_n, levels, tol, omega0, omega_step, omega_max, max_iters,
/// quad_order, seed, perturbation, output_dir, bc_lower, bc_upper (three
/// reals separated by commas or spaces). Frank constants not given take the
/// selected problem's values. Throws ConfigError with the line number on an
/// unknown or repeated key, a malformed value or an out-of-range value.
Config parse_config(const std::string& text);
Config load_config(const std::filesystem::path& path);

/// Problem spec for a parsed config, material and grid overrides applied.
ProblemSpec make_problem(const Config& cfg);
GuessOptions guess_options(const Config& cfg);

/// Header `level,grid,newton_iters,initial_residual,final_residual,min_dev,
/// max_dev,energy`, one row per level (grid as `NxN`, energy with 4
/// significant digits, other reals with 7), then `work_units,<value>` when
/// the log has levels. Throws IoError.
void write_runlog_csv(const RunLog& log, const std::filesystem::path& path);
std::string format_runlog_csv(const RunLog& log);
RunLog read_runlog_csv(const std::filesystem::path& path);
RunLog parse_runlog_csv(const std::string& text);

/// Legacy ASCII VTK: mesh vertices as POINTS, quads, POINT_DATA vectors
/// `director` (the field at the vertices), CELL_DATA scalars `lambda` (cell
/// centre value) and a field array `director_q2` holding the 9 x 3 nodal
/// coefficients of every cell, which read_vtk uses to rebuild the Q2 field.
/// The title line records the grid and the Frank constants.
void write_vtk(const NematicState& state, const std::filesystem::path& path);
std::string format_vtk(const NematicState& state);

/// Rebuilds a Q2 director / P0 multiplier state from write_vtk output.
/// Throws IoError on malformed input.
NematicState read_vtk(const std::filesystem::path& path);
NematicState parse_vtk(const std::string& text);

/// Coordinate real general format, 1-based indices, 17 significant digits.
void write_matrix_market(const Eigen::SparseMatrix<double>& m, const std::filesystem::path& path);
std::string format_matrix_market(const Eigen::SparseMatrix<double>& m);

}  // namespace nematic
