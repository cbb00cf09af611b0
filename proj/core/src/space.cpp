#include "nematic/space.hpp"

#include <stdexcept>

namespace nematic {

Point2 DofMap::node_coords(int node) const {
  const int p = static_cast<int>(degree_);
  const int I = node % ncols_;
  const int J = node / ncols_;
  const int m = p * n_;
  return {static_cast<double>(I) / m, J == m ? 1.0 : static_cast<double>(J) / m};
}

std::vector<int> DofMap::free_director_dofs() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(n_director_dofs()) - dirichlet_list_.size());
  for (int d = 0; d < n_director_dofs(); ++d) {
    if (!is_dirichlet(d)) out.push_back(d);
  }
  return out;
}

DofMap build_dofmap(const Mesh& mesh, LagrangeDegree degree, MultiplierElement multiplier) {
  DofMap dm;
  const int n = mesh.cells_per_side();
  const int p = static_cast<int>(degree);
  const int m = p * n;  // lattice intervals per side
  dm.degree_ = degree;
  dm.multiplier_ = multiplier;
  dm.n_ = n;
  dm.periodic_ = mesh.periodic_x();
  dm.nrows_ = m + 1;
  dm.ncols_ = dm.periodic_ ? m : m + 1;

  const int nb = (p + 1) * (p + 1);
  dm.cell_nodes_.resize(static_cast<std::size_t>(n * n));
  dm.cell_dofs_.resize(static_cast<std::size_t>(n * n));
  dm.cell_lambda_.resize(static_cast<std::size_t>(n * n));
  const int lambda_cols = dm.periodic_ ? n : n + 1;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int c = j * n + i;
      auto& nodes = dm.cell_nodes_[static_cast<std::size_t>(c)];
      auto& dofs = dm.cell_dofs_[static_cast<std::size_t>(c)];
      nodes.resize(static_cast<std::size_t>(nb));
      dofs.resize(static_cast<std::size_t>(3 * nb));
      for (int ly = 0; ly <= p; ++ly) {
        for (int lx = 0; lx <= p; ++lx) {
          const int a = ly * (p + 1) + lx;
          const int node = dm.node_id(p * i + lx, p * j + ly);
          nodes[static_cast<std::size_t>(a)] = node;
          for (int comp = 0; comp < 3; ++comp) {
            dofs[static_cast<std::size_t>(3 * a + comp)] = 3 * node + comp;
          }
        }
      }
      auto& lam = dm.cell_lambda_[static_cast<std::size_t>(c)];
      if (multiplier == MultiplierElement::P0) {
        lam = {c};
      } else {
        lam.resize(4);
        for (int ly = 0; ly <= 1; ++ly) {
          for (int lx = 0; lx <= 1; ++lx) {
            int I = i + lx;
            if (dm.periodic_ && I == n) I = 0;
            lam[static_cast<std::size_t>(ly * 2 + lx)] = (j + ly) * lambda_cols + I;
          }
        }
      }
    }
  }
  dm.n_lambda_ = multiplier == MultiplierElement::P0 ? n * n : lambda_cols * (n + 1);

  dm.dirichlet_.assign(static_cast<std::size_t>(dm.n_director_dofs()), 0);
  for (int node = 0; node < dm.num_nodes(); ++node) {
    const int I = node % dm.ncols_;
    const int J = node / dm.ncols_;
    const bool on_y = (J == 0 || J == m);
    const bool on_x = !dm.periodic_ && (I == 0 || I == m);
    if (on_y || on_x) {
      for (int comp = 0; comp < 3; ++comp) {
        dm.dirichlet_[static_cast<std::size_t>(3 * node + comp)] = 1;
        dm.dirichlet_list_.push_back(3 * node + comp);
      }
    }
  }
  if (dm.periodic_) {
    for (int J = 0; J <= m; ++J) {
      dm.periodic_pairs_.emplace_back(J * (m + 1) + m, J * (m + 1));
    }
  }
  return dm;
}

std::shared_ptr<const Discretization> make_discretization(Mesh mesh, LagrangeDegree degree,
                                                          MultiplierElement multiplier) {
  auto disc = std::make_shared<Discretization>(Discretization{std::move(mesh), {}, {}, {}});
  disc->dofs = build_dofmap(disc->mesh, degree, multiplier);
  const int nc = disc->dofs.num_cells();
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(nc));
  std::vector<std::vector<int>> lam(static_cast<std::size_t>(nc));
  for (int c = 0; c < nc; ++c) {
    rows[static_cast<std::size_t>(c)] = disc->dofs.cell_dofs(c);
    lam[static_cast<std::size_t>(c)] = disc->dofs.cell_lambda_dofs(c);
  }
  const int nd = disc->dofs.n_director_dofs();
  const int nl = disc->dofs.n_lambda_dofs();
  disc->a_pattern =
      std::make_shared<const SparsityPattern>(SparsityPattern::from_elements(nd, nd, rows, rows));
  disc->b_pattern =
      std::make_shared<const SparsityPattern>(SparsityPattern::from_elements(nd, nl, rows, lam));
  return disc;
}

FieldVector interpolate_director(const DofMap& dofs, const DirectorFunction& f) {
  FieldVector out{FieldKind::Director, Eigen::VectorXd::Zero(dofs.n_director_dofs())};
  for (int node = 0; node < dofs.num_nodes(); ++node) {
    const Point2 x = dofs.node_coords(node);
    const Vec3 v = f(x.x, x.y);
    out.values.segment<3>(3 * node) = v;
  }
  return out;
}

std::pair<Vec3, Grad3x2> evaluate_director(const Discretization& disc,
                                           const Eigen::VectorXd& director, int cell,
                                           Point2 ref) {
  std::vector<double> phi;
  std::vector<std::array<double, 2>> dphi;
  lagrange_basis(disc.dofs.director_degree(), ref, phi, &dphi);
  const double scale = 2.0 / disc.mesh.h();
  const auto& nodes = disc.dofs.cell_nodes(cell);
  Vec3 n = Vec3::Zero();
  Grad3x2 g = Grad3x2::Zero();
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    const Vec3 coef = director.segment<3>(3 * nodes[a]);
    n += phi[a] * coef;
    g.col(0) += dphi[a][0] * scale * coef;
    g.col(1) += dphi[a][1] * scale * coef;
  }
  return {n, g};
}

NematicState prolong(const NematicState& coarse, std::shared_ptr<const Discretization> fine) {
  const Mesh& cm = coarse.mesh();
  const Mesh& fm = fine->mesh;
  if (!is_refinement_of(fm, cm) ||
      fine->dofs.director_degree() != coarse.dofs().director_degree() ||
      fine->dofs.multiplier_element() != coarse.dofs().multiplier_element()) {
    throw std::invalid_argument("prolong: fine discretization is not the refinement of the coarse one");
  }
  const DofMap& cd = coarse.dofs();
  const DofMap& fd = fine->dofs;
  const int p = static_cast<int>(cd.director_degree());
  const int nc = cm.cells_per_side();

  NematicState out;
  out.disc = fine;
  out.material = coarse.material;
  out.director.values = Eigen::VectorXd::Zero(fd.n_director_dofs());

  // Fine lattice index I_f maps into coarse cell floor(I_f / 2p) at reference
  // coordinate (I_f - 2p * cell) / p - 1, an exact binary fraction.
  std::vector<double> phi;
  const int mf = p * fm.cells_per_side();
  for (int J = 0; J <= mf; ++J) {
    const int cj = std::min(J / (2 * p), nc - 1);
    const double eta = static_cast<double>(J - 2 * p * cj) / p - 1.0;
    for (int I = 0; I <= mf; ++I) {
      if (fd.periodic_x() && I == mf) continue;
      const int ci = std::min(I / (2 * p), nc - 1);
      const double xi = static_cast<double>(I - 2 * p * ci) / p - 1.0;
      lagrange_basis(cd.director_degree(), {xi, eta}, phi);
      const auto& nodes = cd.cell_nodes(cm.cell_index(ci, cj));
      Vec3 v = Vec3::Zero();
      for (std::size_t a = 0; a < nodes.size(); ++a) {
        v += phi[a] * coarse.director.values.segment<3>(3 * nodes[a]);
      }
      out.director.values.segment<3>(3 * fd.node_id(I, J)) = v;
    }
  }

  out.lambda.values = Eigen::VectorXd::Zero(fd.n_lambda_dofs());
  if (coarse.lambda.values.size() != cd.n_lambda_dofs()) {
    throw std::invalid_argument("prolong: coarse multiplier has wrong length");
  }
  if (fd.multiplier_element() == MultiplierElement::P0) {
    const auto& parent = fm.parent_of();
    for (int c = 0; c < fm.num_cells(); ++c) {
      out.lambda.values[c] = coarse.lambda.values[parent[static_cast<std::size_t>(c)]];
    }
  } else {
    // Q1 multiplier: nodal interpolation on the vertex lattice.
    const int nf = fm.cells_per_side();
    const int ccols = cd.periodic_x() ? nc : nc + 1;
    const int fcols = fd.periodic_x() ? nf : nf + 1;
    for (int J = 0; J <= nf; ++J) {
      const int cj = std::min(J / 2, nc - 1);
      const double ty = 0.5 * (J - 2 * cj);
      for (int I = 0; I < fcols; ++I) {
        const int ci = std::min(I / 2, nc - 1);
        const double tx = 0.5 * (I - 2 * ci);
        auto at = [&](int a, int b) {
          int ii = ci + a;
          if (cd.periodic_x() && ii == nc) ii = 0;
          return coarse.lambda.values[(cj + b) * ccols + ii];
        };
        out.lambda.values[J * fcols + I] = (1 - tx) * (1 - ty) * at(0, 0) + tx * (1 - ty) * at(1, 0) +
                                           tx * ty * at(1, 1) + (1 - tx) * ty * at(0, 1);
      }
    }
  }
  return out;
}

void apply_dirichlet(const DofMap& dofs, SaddleSystem& sys) {
  const auto& pa = sys.A.pattern();
  auto av = sys.A.values();
  for (int r = 0; r < pa.rows; ++r) {
    const bool row_fixed = dofs.is_dirichlet(r);
    for (int k = pa.row_offsets[static_cast<std::size_t>(r)];
         k < pa.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
      const int c = pa.col_indices[static_cast<std::size_t>(k)];
      if (row_fixed || dofs.is_dirichlet(c)) {
        av[static_cast<std::size_t>(k)] = (row_fixed && c == r) ? 1.0 : 0.0;
      }
    }
  }
  const auto& pb = sys.B.pattern();
  auto bv = sys.B.values();
  for (const int d : dofs.dirichlet_dofs()) {
    for (int k = pb.row_offsets[static_cast<std::size_t>(d)];
         k < pb.row_offsets[static_cast<std::size_t>(d) + 1]; ++k) {
      bv[static_cast<std::size_t>(k)] = 0.0;
    }
    sys.rhs_f[d] = 0.0;
  }
}

}  // namespace nematic
