#pragma once

#include <functional>
#include <memory>
#include <utility>

#include "nematic/elements.hpp"
#include "nematic/model.hpp"
#include "nematic/space.hpp"
#include "nematic/sparse.hpp"

namespace nematic {

struct AssemblyOptions {
  bool with_matrix = true;
  bool apply_constraints = true;
  /// Worker threads; 0 reads NEMATIC_THREADS (default 1).
  int threads = 0;
};

/// Number of assembly threads implied by NEMATIC_THREADS (>= 1).
int assembly_threads_from_env();

/// Builds A, B, F, G of one Newton step at the current state:
///   a(dn, v) + b(v, dl) = F(v),  b(dn, g) = G(g).
/// Cell contributions are summed in cell order per thread and thread buffers
/// merged in thread order, so results are reproducible for a fixed thread
/// count. Throws std::invalid_argument on inconsistent state dimensions.
SaddleSystem assemble(const NematicState& state, const QuadratureRule& rule,
                      const AssemblyOptions& options = {});

/// Euclidean norm of the stacked free-DOF right-hand side (F, G).
double residual_norm(const NematicState& state, const QuadratureRule& rule);
double residual_norm(const SaddleSystem& constrained);

/// Discrete Lagrangian E(n) + 1/2 int lambda (|n|^2 - 1).
double lagrangian_value(const NematicState& state, const QuadratureRule& rule);

/// Calls f(cell, point_state, JxW) at every quadrature point, cell-major.
void for_each_quadrature_point(
    const NematicState& state, const QuadratureRule& rule,
    const std::function<void(int cell, const PointState& p, double jxw)>& f);

/// Sparse direct solver for the indefinite block system (UMFPACK when
/// available, Eigen's SparseLU otherwise). The symbolic analysis is reused
/// while the sparsity structure stays the same.
class SaddleSolver {
public:
  SaddleSolver();
  ~SaddleSolver();
  SaddleSolver(SaddleSolver&&) noexcept;
  SaddleSolver& operator=(SaddleSolver&&) noexcept;
  SaddleSolver(const SaddleSolver&) = delete;
  SaddleSolver& operator=(const SaddleSolver&) = delete;

  /// Returns (delta_n, delta_lambda). Throws SingularMatrixError when the
  /// factorization fails or the linear residual exceeds 1e-10 * |rhs|.
  std::pair<FieldVector, FieldVector> solve(const SaddleSystem& sys);

  /// Relative linear residual of the most recent solve.
  [[nodiscard]] double last_relative_residual() const noexcept { return last_residual_; }
  /// Solves that were redone with the BLAS-free LU after the primary
  /// factorization missed the residual tolerance.
  [[nodiscard]] int fallback_solves() const noexcept { return fallback_solves_; }
  /// "umfpack" or "eigen-sparselu".
  static const char* backend_name() noexcept;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double last_residual_ = 0.0;
  int fallback_solves_ = 0;
};

std::pair<FieldVector, FieldVector> solve_saddle(const SaddleSystem& sys);

}  // namespace nematic
