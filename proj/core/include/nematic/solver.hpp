#pragma once

#include <functional>
#include <vector>

#include "nematic/assembly.hpp"
#include "nematic/elements.hpp"
#include "nematic/problems.hpp"
#include "nematic/space.hpp"

namespace nematic {

struct NewtonConfig {
  double tol = 1e-3;
  double omega0 = 0.2;
  double omega_step = 0.2;
  double omega_max = 1.0;
  int max_iters = 100;
  /// Updates taken on every prolonged level of nested iteration before the
  /// tolerance may end it (newton_solve_level itself checks before each
  /// update). With 1, every refined grid takes at least one step.
  int min_refined_iters = 1;
  int quadrature_order = 3;

  /// Throws std::invalid_argument for non-positive tol, max_iters or omega
  /// outside (0, 1].
  void validate() const;
};

/// omega(l) = min(omega0 + omega_step * l, omega_max), l = 0 on the coarsest grid.
double damping_for_level(const NewtonConfig& cfg, int level);

struct LevelRecord {
  int level = 0;
  int cells_per_side = 0;
  int newton_iters = 0;
  double initial_residual = 0.0;
  double final_residual = 0.0;
  double min_dev = 0.0;
  double max_dev = 0.0;
  double energy = 0.0;
  double omega = 1.0;
  long long nnz = 0;
  bool converged = false;
};

struct RunLog {
  std::vector<LevelRecord> levels;
  double work_units = 0.0;

  /// Recomputes work_units = sum iters * nnz(level) / nnz(finest).
  void finalize();
};

struct LevelResult {
  NematicState state;
  LevelRecord record;
};

/// Damped Newton on one grid: x <- x + omega * delta until the free-DOF
/// residual norm drops to cfg.tol (checked before every update) or
/// cfg.max_iters updates were taken; at least min_iters updates are taken
/// regardless of the residual. Throws DivergenceError on a non-finite
/// residual and SingularMatrixError from the linear solve.
LevelResult newton_solve_level(NematicState state, const NewtonConfig& cfg, double omega,
                               int level = 0, int min_iters = 0);

struct SolveOptions {
  bool nested = true;
  GuessOptions guess;
  /// Keep the converged state of every level in SolveResult::level_states.
  bool keep_levels = false;
  std::function<void(const LevelRecord&)> on_level;
};

struct SolveResult {
  NematicState state;
  RunLog log;
  std::vector<NematicState> level_states;
};

/// Nested iteration from spec.coarse_n over spec.levels uniform refinements,
/// prolonging each converged state as the next guess. With
/// options.nested = false a single damped Newton solve with omega0 runs on
/// the finest grid, starting from the coarse-grid guess prolonged there with
/// exact boundary values.
SolveResult solve_problem(const ProblemSpec& spec, const NewtonConfig& cfg,
                          const SolveOptions& options = {});

/// Frank-Oseen energy of the discrete director.
double evaluate_energy(const NematicState& state, int quadrature_order = 3);

struct LengthDeviation {
  double min = 0.0;  // min over quadrature points of |n|^2 - 1
  double max = 0.0;
};

LengthDeviation length_deviation(const NematicState& state, int quadrature_order = 3);

}  // namespace nematic
