#include "nematic/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/SparseLU>
#ifdef NEMATIC_HAVE_UMFPACK
#include <umfpack.h>
#endif

#include "nematic/errors.hpp"

namespace nematic {

namespace {

void check_state(const NematicState& state) {
  if (!state.disc) throw std::invalid_argument("state has no discretization");
  const DofMap& dm = state.dofs();
  if (state.director.values.size() != dm.n_director_dofs()) {
    throw std::invalid_argument("director vector length " +
                                std::to_string(state.director.values.size()) + " != " +
                                std::to_string(dm.n_director_dofs()));
  }
  if (state.lambda.values.size() != dm.n_lambda_dofs()) {
    throw std::invalid_argument("lambda vector length " +
                                std::to_string(state.lambda.values.size()) + " != " +
                                std::to_string(dm.n_lambda_dofs()));
  }
}

// Shape data shared by all cells of one uniform mesh.
struct CellTables {
  ShapeTable director;
  ShapeTable multiplier;  // Q1 table; unused for P0
  bool p0;
  std::vector<double> jxw;  // weights * det J (identical for every cell)
  double grad_scale;

  CellTables(const NematicState& s, const QuadratureRule& rule)
      : director(s.dofs().director_degree(), rule),
        multiplier(LagrangeDegree::Q1, rule),
        p0(s.dofs().multiplier_element() == MultiplierElement::P0) {
    const CellMap map = map_cell(s.mesh().cell_geometry(0));
    grad_scale = map.grad_scale;
    for (const double w : rule.weights) jxw.push_back(w * map.det_jacobian);
  }
};

// Computes the point state at quadrature point q of a cell.
struct CellEvaluator {
  const NematicState& s;
  const CellTables& t;
  std::vector<Vec3> coef;
  std::vector<double> lam;

  CellEvaluator(const NematicState& state, const CellTables& tables)
      : s(state), t(tables) {}

  void load(int cell) {
    const auto& nodes = s.dofs().cell_nodes(cell);
    coef.resize(nodes.size());
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      coef[a] = s.director.values.segment<3>(3 * nodes[a]);
    }
    const auto& ld = s.dofs().cell_lambda_dofs(cell);
    lam.resize(ld.size());
    for (std::size_t m = 0; m < ld.size(); ++m) lam[m] = s.lambda.values[ld[m]];
  }

  [[nodiscard]] double psi(int m, int q) const {
    return t.p0 ? 1.0 : t.multiplier.value(m, q);
  }

  [[nodiscard]] PointState at(int q) const {
    Vec3 n = Vec3::Zero();
    Grad3x2 g = Grad3x2::Zero();
    for (int a = 0; a < t.director.num_basis(); ++a) {
      const Vec3& c = coef[static_cast<std::size_t>(a)];
      n += t.director.value(a, q) * c;
      g.col(0) += (t.director.grad_ref(a, q, 0) * t.grad_scale) * c;
      g.col(1) += (t.director.grad_ref(a, q, 1) * t.grad_scale) * c;
    }
    double l = 0.0;
    for (std::size_t m = 0; m < lam.size(); ++m) l += psi(static_cast<int>(m), q) * lam[m];
    return make_point_state(n, g, l);
  }
};

struct Buffers {
  std::vector<double> a;
  std::vector<double> b;
  Eigen::VectorXd f;
  Eigen::VectorXd g;
};

void assemble_range(const NematicState& s, const CellTables& t, const SaddleSystem& layout,
                    bool with_matrix, int cell_begin, int cell_end, Buffers& out) {
  const DofMap& dm = s.dofs();
  const MaterialParams& mat = s.material;
  const int nb = t.director.num_basis();
  const int nq = t.director.num_points();
  const int nloc = 3 * nb;
  const int nlam = dm.lambda_per_cell();

  CellEvaluator ev(s, t);
  std::vector<VectorSample> samples(static_cast<std::size_t>(nloc));
  std::vector<double> ae(static_cast<std::size_t>(nloc * nloc));
  std::vector<double> be(static_cast<std::size_t>(nloc * nlam));
  std::vector<double> fe(static_cast<std::size_t>(nloc));
  std::vector<double> ge(static_cast<std::size_t>(nlam));

  const auto& pa = layout.A.pattern();
  const auto& pb = layout.B.pattern();

  for (int cell = cell_begin; cell < cell_end; ++cell) {
    ev.load(cell);
    std::fill(ae.begin(), ae.end(), 0.0);
    std::fill(be.begin(), be.end(), 0.0);
    std::fill(fe.begin(), fe.end(), 0.0);
    std::fill(ge.begin(), ge.end(), 0.0);

    for (int q = 0; q < nq; ++q) {
      const PointState p = ev.at(q);
      const double jxw = t.jxw[static_cast<std::size_t>(q)];
      for (int a = 0; a < nb; ++a) {
        const double phi = t.director.value(a, q);
        const double dx = t.director.grad_ref(a, q, 0) * t.grad_scale;
        const double dy = t.director.grad_ref(a, q, 1) * t.grad_scale;
        for (int c = 0; c < 3; ++c) {
          samples[static_cast<std::size_t>(3 * a + c)] = component_sample(c, phi, dx, dy);
        }
      }
      for (int m = 0; m < nlam; ++m) {
        ge[static_cast<std::size_t>(m)] -=
            jxw * multiplier_residual_integrand(p, ev.psi(m, q));
      }
      for (int k = 0; k < nloc; ++k) {
        const VectorSample& v = samples[static_cast<std::size_t>(k)];
        fe[static_cast<std::size_t>(k)] -= jxw * residual_integrand(p, v, mat);
        if (!with_matrix) continue;
        for (int l = k; l < nloc; ++l) {
          const double val =
              jxw * hessian_integrand(p, samples[static_cast<std::size_t>(l)], v, mat);
          ae[static_cast<std::size_t>(k * nloc + l)] += val;
        }
        for (int m = 0; m < nlam; ++m) {
          be[static_cast<std::size_t>(k * nlam + m)] += jxw * coupling_integrand(p, v, ev.psi(m, q));
        }
      }
    }

    const auto& dofs = dm.cell_dofs(cell);
    const auto& ldofs = dm.cell_lambda_dofs(cell);
    for (int k = 0; k < nloc; ++k) {
      const int gk = dofs[static_cast<std::size_t>(k)];
      out.f[gk] += fe[static_cast<std::size_t>(k)];
      if (!with_matrix) continue;
      for (int l = 0; l < nloc; ++l) {
        const int gl = dofs[static_cast<std::size_t>(l)];
        const double val = l >= k ? ae[static_cast<std::size_t>(k * nloc + l)]
                                  : ae[static_cast<std::size_t>(l * nloc + k)];
        out.a[static_cast<std::size_t>(pa.find(gk, gl))] += val;
      }
      for (int m = 0; m < nlam; ++m) {
        out.b[static_cast<std::size_t>(pb.find(gk, ldofs[static_cast<std::size_t>(m)]))] +=
            be[static_cast<std::size_t>(k * nlam + m)];
      }
    }
    for (int m = 0; m < nlam; ++m) {
      out.g[ldofs[static_cast<std::size_t>(m)]] += ge[static_cast<std::size_t>(m)];
    }
  }
}

}  // namespace

int assembly_threads_from_env() {
  const char* env = std::getenv("NEMATIC_THREADS");
  if (!env || !*env) return 1;
  const int v = std::atoi(env);
  return v >= 1 ? v : 1;
}

SaddleSystem assemble(const NematicState& state, const QuadratureRule& rule,
                      const AssemblyOptions& options) {
  check_state(state);
  const DofMap& dm = state.dofs();
  const CellTables tables(state, rule);

  SaddleSystem sys;
  sys.A = SparseMatrix(state.disc->a_pattern);
  sys.B = SparseMatrix(state.disc->b_pattern);
  const int nd = dm.n_director_dofs();
  const int nl = dm.n_lambda_dofs();
  const int ncells = dm.num_cells();

  int threads = options.threads > 0 ? options.threads : assembly_threads_from_env();
  threads = std::max(1, std::min(threads, ncells));

  auto make_buffers = [&] {
    Buffers b;
    if (options.with_matrix) {
      b.a.assign(static_cast<std::size_t>(sys.A.nnz()), 0.0);
      b.b.assign(static_cast<std::size_t>(sys.B.nnz()), 0.0);
    }
    b.f = Eigen::VectorXd::Zero(nd);
    b.g = Eigen::VectorXd::Zero(nl);
    return b;
  };

  std::vector<Buffers> buffers;
  buffers.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) buffers.push_back(make_buffers());

  if (threads == 1) {
    assemble_range(state, tables, sys, options.with_matrix, 0, ncells, buffers[0]);
  } else {
    std::vector<std::thread> workers;
    for (int t = 0; t < threads; ++t) {
      const int begin = static_cast<int>(static_cast<long long>(ncells) * t / threads);
      const int end = static_cast<int>(static_cast<long long>(ncells) * (t + 1) / threads);
      workers.emplace_back([&, t, begin, end] {
        assemble_range(state, tables, sys, options.with_matrix, begin, end,
                       buffers[static_cast<std::size_t>(t)]);
      });
    }
    for (auto& w : workers) w.join();
  }

  sys.rhs_f = std::move(buffers[0].f);
  sys.rhs_g = std::move(buffers[0].g);
  if (options.with_matrix) {
    std::copy(buffers[0].a.begin(), buffers[0].a.end(), sys.A.values().begin());
    std::copy(buffers[0].b.begin(), buffers[0].b.end(), sys.B.values().begin());
  }
  for (std::size_t t = 1; t < buffers.size(); ++t) {
    sys.rhs_f += buffers[t].f;
    sys.rhs_g += buffers[t].g;
    if (!options.with_matrix) continue;
    auto av = sys.A.values();
    auto bv = sys.B.values();
    for (std::size_t k = 0; k < av.size(); ++k) av[k] += buffers[t].a[k];
    for (std::size_t k = 0; k < bv.size(); ++k) bv[k] += buffers[t].b[k];
  }

  if (options.apply_constraints) {
    if (options.with_matrix) {
      apply_dirichlet(dm, sys);
    } else {
      for (const int d : dm.dirichlet_dofs()) sys.rhs_f[d] = 0.0;
    }
  }
  return sys;
}

double residual_norm(const SaddleSystem& constrained) {
  return std::sqrt(constrained.rhs_f.squaredNorm() + constrained.rhs_g.squaredNorm());
}

double residual_norm(const NematicState& state, const QuadratureRule& rule) {
  AssemblyOptions opt;
  opt.with_matrix = false;
  return residual_norm(assemble(state, rule, opt));
}

void for_each_quadrature_point(
    const NematicState& state, const QuadratureRule& rule,
    const std::function<void(int cell, const PointState& p, double jxw)>& f) {
  check_state(state);
  const CellTables tables(state, rule);
  CellEvaluator ev(state, tables);
  for (int cell = 0; cell < state.dofs().num_cells(); ++cell) {
    ev.load(cell);
    for (int q = 0; q < rule.size(); ++q) {
      f(cell, ev.at(q), tables.jxw[static_cast<std::size_t>(q)]);
    }
  }
}

double lagrangian_value(const NematicState& state, const QuadratureRule& rule) {
  double sum = 0.0;
  for_each_quadrature_point(state, rule, [&](int, const PointState& p, double jxw) {
    sum += jxw * (energy_density(p, state.material) +
                  0.5 * p.lambda * (p.n.squaredNorm() - 1.0));
  });
  return sum;
}

// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void throw_singular(const std::string& detail) {
  throw SingularMatrixError(
      "saddle-point matrix is singular (" + detail +
      "); the director/multiplier element pair has likely lost weak coercivity of b(.,.), "
      "as equal-order Q1-Q1 pairs do");
}

bool same_structure(const Eigen::SparseMatrix<double>& m, const std::vector<int>& outer,
                    const std::vector<int>& inner) {
  const auto nnz = static_cast<std::size_t>(m.nonZeros());
  const auto cols = static_cast<std::size_t>(m.cols());
  return outer.size() == cols + 1 && inner.size() == nnz &&
         std::equal(outer.begin(), outer.end(), m.outerIndexPtr()) &&
         std::equal(inner.begin(), inner.end(), m.innerIndexPtr());
}

double relative_residual(const Eigen::SparseMatrix<double>& K, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& rhs) {
  if (!x.allFinite()) return std::numeric_limits<double>::infinity();
  const double rhs_norm = rhs.norm();
  const double res = (K * x - rhs).norm();
  return rhs_norm > 0.0 ? res / rhs_norm : res;
}

// Symbolic analyses are keyed on the pruned structure.
struct SparseLUBackend {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  std::vector<int> outer;
  std::vector<int> inner;

  Eigen::VectorXd solve(const Eigen::SparseMatrix<double>& K, const Eigen::VectorXd& rhs) {
    if (!same_structure(K, outer, inner)) {
      lu.analyzePattern(K);
      outer.assign(K.outerIndexPtr(), K.outerIndexPtr() + K.cols() + 1);
      inner.assign(K.innerIndexPtr(), K.innerIndexPtr() + K.nonZeros());
    }
    lu.factorize(K);
    if (lu.info() != Eigen::Success) {
      outer.clear();
      throw_singular("factorization reported a zero pivot");
    }
    return lu.solve(rhs);
  }
};

#ifdef NEMATIC_HAVE_UMFPACK
struct UmfpackBackend {
  void* symbolic = nullptr;
  std::vector<int> outer;
  std::vector<int> inner;
  double control[UMFPACK_CONTROL];

  UmfpackBackend() { umfpack_di_defaults(control); }
  ~UmfpackBackend() { release(); }
  UmfpackBackend(const UmfpackBackend&) = delete;
  UmfpackBackend& operator=(const UmfpackBackend&) = delete;

  void release() {
    if (symbolic) umfpack_di_free_symbolic(&symbolic);
    symbolic = nullptr;
    outer.clear();
    inner.clear();
  }

  Eigen::VectorXd solve(const Eigen::SparseMatrix<double>& K, const Eigen::VectorXd& rhs) {
    const int n = static_cast<int>(K.rows());
    double info[UMFPACK_INFO];
    if (!symbolic || !same_structure(K, outer, inner)) {
      release();
      const int st = umfpack_di_symbolic(n, n, K.outerIndexPtr(), K.innerIndexPtr(), K.valuePtr(),
                                         &symbolic, control, info);
      if (st != UMFPACK_OK) {
        symbolic = nullptr;
        throw_singular("symbolic analysis failed, UMFPACK status " + std::to_string(st));
      }
      outer.assign(K.outerIndexPtr(), K.outerIndexPtr() + n + 1);
      inner.assign(K.innerIndexPtr(), K.innerIndexPtr() + K.nonZeros());
    }
    void* numeric = nullptr;
    const int st = umfpack_di_numeric(K.outerIndexPtr(), K.innerIndexPtr(), K.valuePtr(), symbolic,
                                      &numeric, control, info);
    if (st != UMFPACK_OK) {
      if (numeric) umfpack_di_free_numeric(&numeric);
      throw_singular(st == UMFPACK_WARNING_singular_matrix
                         ? "factorization reported a zero pivot"
                         : "numeric factorization failed, UMFPACK status " + std::to_string(st));
    }
    Eigen::VectorXd x(n);
    const int ss = umfpack_di_solve(UMFPACK_A, K.outerIndexPtr(), K.innerIndexPtr(), K.valuePtr(),
                                    x.data(), rhs.data(), numeric, control, info);
    umfpack_di_free_numeric(&numeric);
    if (ss != UMFPACK_OK) throw_singular("solve failed, UMFPACK status " + std::to_string(ss));
    return x;
  }
};
#endif

}  // namespace

struct SaddleSolver::Impl {
#ifdef NEMATIC_HAVE_UMFPACK
  UmfpackBackend umfpack;
#endif
  SparseLUBackend sparselu;
};

SaddleSolver::SaddleSolver() : impl_(std::make_unique<Impl>()) {}
SaddleSolver::~SaddleSolver() = default;
SaddleSolver::SaddleSolver(SaddleSolver&&) noexcept = default;
SaddleSolver& SaddleSolver::operator=(SaddleSolver&&) noexcept = default;

const char* SaddleSolver::backend_name() noexcept {
#ifdef NEMATIC_HAVE_UMFPACK
  return "umfpack";
#else
  return "eigen-sparselu";
#endif
}

std::pair<FieldVector, FieldVector> SaddleSolver::solve(const SaddleSystem& sys) {
  const int nd = sys.num_director();
  const int nl = sys.num_multiplier();
  if (sys.rhs_f.size() != nd || sys.rhs_g.size() != nl || sys.B.rows() != nd) {
    throw std::invalid_argument("solve_saddle: inconsistent block dimensions");
  }
  Eigen::SparseMatrix<double> K = sys.block_matrix();
  K.prune(0.0, 0.0);
  K.makeCompressed();
  const Eigen::VectorXd rhs = sys.block_rhs();
  if (!rhs.allFinite() ||
      !Eigen::Map<const Eigen::VectorXd>(K.valuePtr(), K.nonZeros()).allFinite()) {
    throw_singular("non-finite entries in the assembled system");
  }

  constexpr double kTol = 1e-10;
  Eigen::VectorXd x;
#ifdef NEMATIC_HAVE_UMFPACK
  try {
    x = impl_->umfpack.solve(K, rhs);
    last_residual_ = relative_residual(K, x, rhs);
  } catch (const SingularMatrixError&) {
    last_residual_ = std::numeric_limits<double>::infinity();
  }
  if (!(last_residual_ <= kTol)) {
    // retry without BLAS
    ++fallback_solves_;
    x = impl_->sparselu.solve(K, rhs);
    last_residual_ = relative_residual(K, x, rhs);
  }
#else
  x = impl_->sparselu.solve(K, rhs);
  last_residual_ = relative_residual(K, x, rhs);
#endif
  if (!(last_residual_ <= kTol)) {
    std::ostringstream os;
    os << "linear residual " << last_residual_ << " exceeds 1e-10 relative";
    throw_singular(os.str());
  }
  return {FieldVector{FieldKind::Director, x.head(nd)}, FieldVector{FieldKind::Lambda, x.tail(nl)}};
}

std::pair<FieldVector, FieldVector> solve_saddle(const SaddleSystem& sys) {
  SaddleSolver solver;
  return solver.solve(sys);
}

}  // namespace nematic
