#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nematic/elements.hpp"
#include "nematic/mesh.hpp"
#include "nematic/model.hpp"
#include "nematic/sparse.hpp"

namespace nematic {

enum class MultiplierElement { P0, Q1 };

/// Degree-of-freedom numbering for the 3-component director (continuous Q1 or
/// Q2) and the scalar multiplier (P0, or continuous Q1 for the unstable
/// equal-order comparison pair).
///
/// Director nodes live on the (p n + 1)^2 lattice with lattice index
/// (I, J), node coordinate (I h / p, J h / p). With periodic_x the column
/// I = p n is identified with I = 0. Director DOF = 3 * node + component.
///
/// Dirichlet DOFs: all nodes on y = 0 and y = 1; on non-periodic meshes
/// also the nodes on x = 0 and x = 1 (full Dirichlet data).
class DofMap {
public:
  DofMap() = default;

  [[nodiscard]] LagrangeDegree director_degree() const noexcept { return degree_; }
  [[nodiscard]] MultiplierElement multiplier_element() const noexcept { return multiplier_; }
  [[nodiscard]] int cells_per_side() const noexcept { return n_; }
  [[nodiscard]] bool periodic_x() const noexcept { return periodic_; }

  [[nodiscard]] int num_nodes() const noexcept { return ncols_ * nrows_; }
  [[nodiscard]] int n_director_dofs() const noexcept { return 3 * num_nodes(); }
  [[nodiscard]] int n_lambda_dofs() const noexcept { return n_lambda_; }
  [[nodiscard]] int nodes_per_cell() const noexcept {
    return (static_cast<int>(degree_) + 1) * (static_cast<int>(degree_) + 1);
  }
  [[nodiscard]] int lambda_per_cell() const noexcept {
    return multiplier_ == MultiplierElement::P0 ? 1 : 4;
  }

  /// Node id of lattice point (I, J), folding the periodic column.
  [[nodiscard]] int node_id(int I, int J) const noexcept {
    const int i = (periodic_ && I == ncols_) ? 0 : I;
    return J * ncols_ + i;
  }
  [[nodiscard]] Point2 node_coords(int node) const;

  /// Global node ids of a cell in reference-lattice order.
  [[nodiscard]] const std::vector<int>& cell_nodes(int cell) const {
    return cell_nodes_[static_cast<std::size_t>(cell)];
  }
  /// Global director DOFs of a cell, local index = 3 * basis + component.
  [[nodiscard]] const std::vector<int>& cell_dofs(int cell) const {
    return cell_dofs_[static_cast<std::size_t>(cell)];
  }
  /// Global multiplier DOFs of a cell (one per cell for P0).
  [[nodiscard]] const std::vector<int>& cell_lambda_dofs(int cell) const {
    return cell_lambda_[static_cast<std::size_t>(cell)];
  }
  [[nodiscard]] int num_cells() const noexcept { return n_ * n_; }

  [[nodiscard]] bool is_dirichlet(int dof) const {
    return dirichlet_[static_cast<std::size_t>(dof)] != 0;
  }
  [[nodiscard]] const std::vector<int>& dirichlet_dofs() const noexcept { return dirichlet_list_; }
  [[nodiscard]] std::vector<int> free_director_dofs() const;

  /// (lattice index of the x = 1 point, lattice index of its x = 0 partner),
  /// lattice index = J * (p n + 1) + I.
  [[nodiscard]] const std::vector<std::pair<int, int>>& periodic_pairs() const noexcept {
    return periodic_pairs_;
  }

  friend DofMap build_dofmap(const Mesh& mesh, LagrangeDegree degree,
                             MultiplierElement multiplier);

private:
  LagrangeDegree degree_ = LagrangeDegree::Q2;
  MultiplierElement multiplier_ = MultiplierElement::P0;
  int n_ = 0;
  bool periodic_ = false;
  int ncols_ = 0;
  int nrows_ = 0;
  int n_lambda_ = 0;
  std::vector<std::vector<int>> cell_nodes_;
  std::vector<std::vector<int>> cell_dofs_;
  std::vector<std::vector<int>> cell_lambda_;
  std::vector<char> dirichlet_;
  std::vector<int> dirichlet_list_;
  std::vector<std::pair<int, int>> periodic_pairs_;
};

DofMap build_dofmap(const Mesh& mesh, LagrangeDegree degree = LagrangeDegree::Q2,
                    MultiplierElement multiplier = MultiplierElement::P0);

/// Mesh, DOF map and the sparsity patterns of the A and B blocks.
struct Discretization {
  Mesh mesh;
  DofMap dofs;
  std::shared_ptr<const SparsityPattern> a_pattern;
  std::shared_ptr<const SparsityPattern> b_pattern;
};

std::shared_ptr<const Discretization> make_discretization(
    Mesh mesh, LagrangeDegree degree = LagrangeDegree::Q2,
    MultiplierElement multiplier = MultiplierElement::P0);

enum class FieldKind { Director, Lambda };

struct FieldVector {
  FieldKind kind = FieldKind::Director;
  Eigen::VectorXd values;
};

/// Director and multiplier coefficients on one discretization.
struct NematicState {
  std::shared_ptr<const Discretization> disc;
  MaterialParams material;
  FieldVector director{FieldKind::Director, {}};
  FieldVector lambda{FieldKind::Lambda, {}};

  [[nodiscard]] const Mesh& mesh() const { return disc->mesh; }
  [[nodiscard]] const DofMap& dofs() const { return disc->dofs; }
};

using DirectorFunction = std::function<Vec3(double x, double y)>;

/// Nodal interpolation at the director node coordinates.
FieldVector interpolate_director(const DofMap& dofs, const DirectorFunction& f);

/// Director (value, gradient) of the discrete field at a reference point of a cell.
std::pair<Vec3, Grad3x2> evaluate_director(const Discretization& disc,
                                           const Eigen::VectorXd& director, int cell,
                                           Point2 ref);

/// Transfers a state to the uniformly refined discretization: director by
/// nodal interpolation (exact for nested spaces), P0 multiplier by parent
/// injection. Throws std::invalid_argument on lineage mismatch.
NematicState prolong(const NematicState& coarse, std::shared_ptr<const Discretization> fine);

/// Symmetric elimination of the Dirichlet director DOFs: row and column
/// replaced by the identity, zero right-hand side, B row cleared.
void apply_dirichlet(const DofMap& dofs, SaddleSystem& sys);

}  // namespace nematic
