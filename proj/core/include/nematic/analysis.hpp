#pragma once

#include <vector>

#include <Eigen/Core>

#include "nematic/problems.hpp"
#include "nematic/solver.hpp"
#include "nematic/space.hpp"

namespace nematic {

/// Rayleigh-quotient bounds of Z = I - (1 - kappa) n n^T for directors with
/// alpha <= |n|^2 <= beta.
struct UspdBounds {
  double alpha = 1.0;
  double beta = 1.0;
  double kappa = 1.0;
  double eta = 1.0;     // lower bound
  double Lambda = 1.0;  // upper bound
  bool uspd = true;
};

/// Throws std::invalid_argument unless 0 < alpha <= 1 <= beta and kappa > 0.
UspdBounds uspd_bounds(double alpha, double beta, double kappa);

/// (3/2)^N: sup of the integral-normalized bubble times |T|.
/// Throws std::invalid_argument unless dimension is 2 or 3.
double bubble_constant(int dimension);

/// sup over [x0, x0 + w] x [y0, y0 + h] of b / int b, b the product of the
/// edge distances, from a samples x samples grid search (odd counts hit the
/// centre exactly) and a Gauss integral.
double normalized_bubble_sup(double x0, double y0, double w, double h, int samples = 201);

/// Dense probe matrices on the free director DOFs (rows/columns in
/// free_director_dofs() order) and all multiplier DOFs.
struct ProbeMatrices {
  Eigen::MatrixXd A;  // Hessian block a(., .)
  Eigen::MatrixXd B;  // coupling b(v, gamma), free director x multiplier
  Eigen::MatrixXd X;  // DC-norm Gram: mass + div-div + curl-curl
  Eigen::MatrixXd M;  // multiplier mass
};

/// Throws std::invalid_argument for meshes finer than 16 x 16.
ProbeMatrices probe_matrices(const NematicState& state, int quadrature_order = 3);

struct InfSupEstimate {
  int level = 0;
  int cells_per_side = 0;
  double zeta_h = 0.0;
};

/// Smallest generalized singular value of B between the DC norm and the
/// multiplier L2 norm, sigma_min(L_X^-1 B L_M^-T) with X = L_X L_X^T and
/// M = L_M L_M^T. Throws NumericalError when a Cholesky factorization fails.
double infsup_constant(const ProbeMatrices& m);
InfSupEstimate estimate_infsup(const NematicState& state, int quadrature_order = 3);

/// Smallest eigenvalue of A x = mu X x.
double min_generalized_eigenvalue(const Eigen::MatrixXd& A, const Eigen::MatrixXd& X);
double probe_coercivity(const NematicState& state, int quadrature_order = 3);

struct FdCheck {
  double residual_err = 0.0;
  double hessian_err = 0.0;
};

/// Central differences over every free director and multiplier coefficient:
/// of the discrete Lagrangian against the assembled gradient, and of the
/// gradient against the assembled block matrix. Errors are norms of the
/// difference relative to max(norm of the assembled quantity, 1).
/// Throws std::invalid_argument unless step lies in [1e-8, 1e-4] and the
/// mesh is at most 4 x 4.
FdCheck fd_check(const NematicState& state, double step, int quadrature_order = 3);

struct FieldError {
  double l2 = 0.0;
  double dc = 0.0;  // sqrt(|e|^2 + |div e|^2 + |curl e|^2)
};

FieldError dc_norm_error(const NematicState& state, const ExactSolution& exact,
                         int quadrature_order = 4);

/// Least-squares slope of log(y) against log(x). Throws std::invalid_argument
/// for fewer than two points or non-positive data.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ConvergenceStudy {
  std::vector<double> h;
  std::vector<double> l2_error;
  std::vector<double> dc_error;
  double dc_slope = 0.0;
  double l2_slope = 0.0;
};

/// Nested-iteration solve over `levels` grids with cfg, DC-norm error of the
/// converged states on levels first_level .. levels - 1 against spec.exact,
/// slope over those levels. Throws std::invalid_argument when spec has no
/// exact solution or fewer than three levels enter the fit.
ConvergenceStudy convergence_order(ProblemSpec spec, int levels, const NewtonConfig& cfg,
                                   int first_level = 0);

/// The tolerance used by convergence_order studies by default.
NewtonConfig convergence_study_config();

}  // namespace nematic
