#include "nematic/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "nematic/assembly.hpp"
#include "nematic/errors.hpp"

namespace nematic {

UspdBounds uspd_bounds(double alpha, double beta, double kappa) {
  if (!(alpha > 0.0 && alpha <= 1.0 && beta >= 1.0)) {
    throw std::invalid_argument("uspd_bounds: need 0 < alpha <= 1 <= beta");
  }
  if (!(kappa > 0.0)) throw std::invalid_argument("uspd_bounds: kappa must be positive");
  UspdBounds b;
  b.alpha = alpha;
  b.beta = beta;
  b.kappa = kappa;
  if (kappa > 1.0) {
    b.eta = 1.0;
    b.Lambda = 1.0 + (kappa - 1.0) * beta;
    b.uspd = true;
  } else if (kappa == 1.0) {
    b.eta = 1.0;
    b.Lambda = 1.0;
    b.uspd = true;
  } else {
    b.eta = 1.0 + (kappa - 1.0) * beta;
    b.Lambda = 1.0;
    b.uspd = beta < 1.0 / (1.0 - kappa);
  }
  return b;
}

double bubble_constant(int dimension) {
  if (dimension != 2 && dimension != 3) {
    throw std::invalid_argument("bubble_constant: dimension must be 2 or 3");
  }
  return std::pow(1.5, dimension);
}

double normalized_bubble_sup(double x0, double y0, double w, double h, int samples) {
  if (!(w > 0.0 && h > 0.0)) throw std::invalid_argument("bubble: rectangle must be non-degenerate");
  if (samples < 2) throw std::invalid_argument("bubble: need at least two samples per side");
  auto b = [&](double x, double y) { return (x - x0) * (x0 + w - x) * (y - y0) * (y0 + h - y); };

  const QuadratureRule rule = gauss_rule(3);
  double integral = 0.0;
  for (int q = 0; q < rule.size(); ++q) {
    const Point2& r = rule.points[static_cast<std::size_t>(q)];
    integral += rule.weights[static_cast<std::size_t>(q)] * 0.25 * w * h *
                b(x0 + 0.5 * w * (r.x + 1.0), y0 + 0.5 * h * (r.y + 1.0));
  }

  double best = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double y = y0 + h * j / (samples - 1);
    for (int i = 0; i < samples; ++i) best = std::max(best, b(x0 + w * i / (samples - 1), y));
  }
  return best / integral;
}

namespace {

Eigen::MatrixXd restrict_rows(const Eigen::MatrixXd& m, const std::vector<int>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
  return out;
}

Eigen::MatrixXd restrict_square(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = m(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

// Free director coefficients followed by every multiplier coefficient.
struct Coordinates {
  std::vector<int> free;
  int n_lambda = 0;

  explicit Coordinates(const DofMap& dm)
      : free(dm.free_director_dofs()), n_lambda(dm.n_lambda_dofs()) {}

  [[nodiscard]] int size() const { return static_cast<int>(free.size()) + n_lambda; }

  double& at(NematicState& s, int k) const {
    const int nf = static_cast<int>(free.size());
    return k < nf ? s.director.values[free[static_cast<std::size_t>(k)]] : s.lambda.values[k - nf];
  }

  [[nodiscard]] Eigen::VectorXd gradient(const NematicState& s, const QuadratureRule& rule) const {
    AssemblyOptions opts;
    opts.with_matrix = false;
    opts.apply_constraints = false;
    const SaddleSystem sys = assemble(s, rule, opts);
    Eigen::VectorXd g(size());
    const int nf = static_cast<int>(free.size());
    for (int k = 0; k < nf; ++k) g[k] = -sys.rhs_f[free[static_cast<std::size_t>(k)]];
    g.tail(n_lambda) = -sys.rhs_g;
    return g;
  }
};

}  // namespace

ProbeMatrices probe_matrices(const NematicState& state, int quadrature_order) {
  const DofMap& dm = state.dofs();
  if (dm.cells_per_side() > 16) {
    throw std::invalid_argument("probe matrices are dense; mesh must be at most 16 x 16");
  }
  const QuadratureRule rule = gauss_rule(quadrature_order);
  AssemblyOptions opts;
  opts.apply_constraints = false;
  const SaddleSystem sys = assemble(state, rule, opts);

  const int nd = dm.n_director_dofs();
  const int nl = dm.n_lambda_dofs();
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(nd, nd);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nl, nl);

  const ShapeTable dir(dm.director_degree(), rule);
  const ShapeTable q1 = q1_shapes_at(rule);
  const bool p0 = dm.multiplier_element() == MultiplierElement::P0;
  const CellMap map = map_cell(state.mesh().cell_geometry(0));
  const int nb = dir.num_basis();
  std::vector<VectorSample> samples(static_cast<std::size_t>(3 * nb));

  for (int cell = 0; cell < dm.num_cells(); ++cell) {
    const auto& dofs = dm.cell_dofs(cell);
    const auto& ldofs = dm.cell_lambda_dofs(cell);
    for (int q = 0; q < rule.size(); ++q) {
      const double jxw = rule.weights[static_cast<std::size_t>(q)] * map.det_jacobian;
      for (int a = 0; a < nb; ++a) {
        const double dx = dir.grad_ref(a, q, 0) * map.grad_scale;
        const double dy = dir.grad_ref(a, q, 1) * map.grad_scale;
        for (int c = 0; c < 3; ++c) {
          samples[static_cast<std::size_t>(3 * a + c)] = component_sample(c, dir.value(a, q), dx, dy);
        }
      }
      for (std::size_t k = 0; k < samples.size(); ++k) {
        for (std::size_t l = 0; l < samples.size(); ++l) {
          const VectorSample& u = samples[k];
          const VectorSample& v = samples[l];
          X(dofs[k], dofs[l]) +=
              jxw * (u.value.dot(v.value) + u.div * v.div + u.curl.dot(v.curl));
        }
      }
      for (std::size_t m = 0; m < ldofs.size(); ++m) {
        for (std::size_t r = 0; r < ldofs.size(); ++r) {
          const double pm = p0 ? 1.0 : q1.value(static_cast<int>(m), q);
          const double pr = p0 ? 1.0 : q1.value(static_cast<int>(r), q);
          M(ldofs[m], ldofs[r]) += jxw * pm * pr;
        }
      }
    }
  }

  const std::vector<int> free = dm.free_director_dofs();
  ProbeMatrices out;
  out.A = restrict_square(sys.A.to_dense(), free);
  out.B = restrict_rows(sys.B.to_dense(), free);
  out.X = restrict_square(X, free);
  out.M = std::move(M);
  return out;
}

double infsup_constant(const ProbeMatrices& m) {
  const Eigen::LLT<Eigen::MatrixXd> lx(m.X);
  const Eigen::LLT<Eigen::MatrixXd> lm(m.M);
  if (lx.info() != Eigen::Success || lm.info() != Eigen::Success) {
    throw NumericalError("inf-sup estimate: Gram matrix is not positive definite");
  }
  if (m.B.cols() > m.B.rows()) return 0.0;  // more multipliers than free directions
  // C = L_X^-1 B L_M^-T
  Eigen::MatrixXd C = lx.matrixL().solve(m.B);
  C = lm.matrixL().solve(C.transpose()).transpose();
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(C);
  if (svd.info() != Eigen::Success) throw NumericalError("inf-sup estimate: SVD failed");
  const auto& s = svd.singularValues();
  return s.size() ? s[s.size() - 1] : 0.0;
}

InfSupEstimate estimate_infsup(const NematicState& state, int quadrature_order) {
  InfSupEstimate e;
  e.level = state.mesh().level();
  e.cells_per_side = state.mesh().cells_per_side();
  e.zeta_h = infsup_constant(probe_matrices(state, quadrature_order));
  return e;
}

double min_generalized_eigenvalue(const Eigen::MatrixXd& A, const Eigen::MatrixXd& X) {
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (A + A.transpose()), X, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw NumericalError("coercivity probe: eigensolve failed");
  return es.eigenvalues()[0];
}

double probe_coercivity(const NematicState& state, int quadrature_order) {
  const ProbeMatrices m = probe_matrices(state, quadrature_order);
  return min_generalized_eigenvalue(m.A, m.X);
}

FdCheck fd_check(const NematicState& state, double step, int quadrature_order) {
  if (!(step >= 1e-8 && step <= 1e-4)) throw std::invalid_argument("fd_check: step must lie in [1e-8, 1e-4]");
  if (state.mesh().cells_per_side() > 4) throw std::invalid_argument("fd_check: mesh must be at most 4 x 4");
  const QuadratureRule rule = gauss_rule(quadrature_order);
  const Coordinates co(state.dofs());
  const int n = co.size();

  const Eigen::VectorXd g = co.gradient(state, rule);
  AssemblyOptions opts;
  opts.apply_constraints = false;
  const SaddleSystem sys = assemble(state, rule, opts);
  const Eigen::MatrixXd A = restrict_square(sys.A.to_dense(), co.free);
  const Eigen::MatrixXd B = restrict_rows(sys.B.to_dense(), co.free);
  const auto nf = A.rows();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  H.topLeftCorner(nf, nf) = A;
  H.topRightCorner(nf, B.cols()) = B;
  H.bottomLeftCorner(B.cols(), nf) = B.transpose();

  Eigen::VectorXd fd_g(n);
  Eigen::MatrixXd fd_h(n, n);
  NematicState probe = state;
  for (int k = 0; k < n; ++k) {
    double& x = co.at(probe, k);
    const double x0 = x;
    x = x0 + step;
    const double lp = lagrangian_value(probe, rule);
    const Eigen::VectorXd gp = co.gradient(probe, rule);
    x = x0 - step;
    const double lm = lagrangian_value(probe, rule);
    const Eigen::VectorXd gm = co.gradient(probe, rule);
    x = x0;
    fd_g[k] = (lp - lm) / (2.0 * step);
    fd_h.col(k) = (gp - gm) / (2.0 * step);
  }

  FdCheck out;
  out.residual_err = (fd_g - g).norm() / std::max(g.norm(), 1.0);
  out.hessian_err = (fd_h - H).norm() / std::max(H.norm(), 1.0);
  return out;
}

FieldError dc_norm_error(const NematicState& state, const ExactSolution& exact,
                         int quadrature_order) {
  const QuadratureRule rule = gauss_rule(quadrature_order);
  const Mesh& mesh = state.mesh();
  double l2 = 0.0;
  double dc = 0.0;
  for (int cell = 0; cell < mesh.num_cells(); ++cell) {
    const CellMap map = map_cell(mesh.cell_geometry(cell));
    for (int q = 0; q < rule.size(); ++q) {
      const Point2 ref = rule.points[static_cast<std::size_t>(q)];
      const Point2 x = map.to_physical(ref);
      const auto [n, g] = evaluate_director(*state.disc, state.director.values, cell, ref);
      const PointState e =
          make_point_state(n - exact.value(x.x, x.y), g - exact.gradient(x.x, x.y), 0.0);
      const double jxw = rule.weights[static_cast<std::size_t>(q)] * map.det_jacobian;
      const double v2 = e.n.squaredNorm();
      l2 += jxw * v2;
      dc += jxw * (v2 + e.div * e.div + e.curl.squaredNorm());
    }
  }
  return {std::sqrt(l2), std::sqrt(dc)};
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("log_log_slope: need at least two (x, y) pairs");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::invalid_argument("log_log_slope: data must be positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("log_log_slope: x values must differ");
  return (n * sxy - sx * sy) / den;
}

NewtonConfig convergence_study_config() {
  NewtonConfig cfg;
  cfg.tol = 1e-8;
  return cfg;
}

ConvergenceStudy convergence_order(ProblemSpec spec, int levels, const NewtonConfig& cfg,
                                   int first_level) {
  if (!spec.exact) throw std::invalid_argument("convergence_order: problem has no exact solution");
  if (first_level < 0 || levels - first_level < 3) {
    throw std::invalid_argument("convergence_order: need at least three levels in the fit");
  }
  spec.levels = levels;
  SolveOptions opts;
  opts.keep_levels = true;
  const SolveResult res = solve_problem(spec, cfg, opts);
  ConvergenceStudy st;
  for (std::size_t l = static_cast<std::size_t>(first_level); l < res.level_states.size(); ++l) {
    const NematicState& s = res.level_states[l];
    const FieldError e = dc_norm_error(s, *spec.exact);
    st.h.push_back(s.mesh().h());
    st.l2_error.push_back(e.l2);
    st.dc_error.push_back(e.dc);
  }
  st.dc_slope = log_log_slope(st.h, st.dc_error);
  st.l2_slope = log_log_slope(st.h, st.l2_error);
  return st;
}

}  // namespace nematic
