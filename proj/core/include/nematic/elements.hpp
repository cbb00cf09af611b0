#pragma once

#include <array>
#include <vector>

#include "nematic/mesh.hpp"

namespace nematic {

/// Tensor-product rule on the reference square [-1, 1]^2.
struct QuadratureRule {
  int order = 0;  // points per direction
  std::vector<Point2> points;
  std::vector<double> weights;

  [[nodiscard]] int size() const noexcept { return static_cast<int>(points.size()); }
};

/// Tensor Gauss-Legendre rule with `order` points per direction, exact for
/// polynomials of degree <= 2 * order - 1 in each variable.
/// Throws std::invalid_argument unless 1 <= order <= 6.
QuadratureRule gauss_rule(int order);

/// Nodal Lagrange family on the reference square.
enum class LagrangeDegree { Q1 = 1, Q2 = 2 };

/// Basis values and reference gradients tabulated at quadrature points.
///
/// Basis index a = ly * (p + 1) + lx where (lx, ly) indexes the reference
/// node lattice {-1, 0, 1} (Q2) or {-1, 1} (Q1), lower-left first.
class ShapeTable {
public:
  ShapeTable(LagrangeDegree degree, const QuadratureRule& rule);

  [[nodiscard]] LagrangeDegree degree() const noexcept { return degree_; }
  [[nodiscard]] int num_basis() const noexcept { return nb_; }
  [[nodiscard]] int num_points() const noexcept { return nq_; }

  [[nodiscard]] double value(int basis, int point) const {
    return values_[static_cast<std::size_t>(basis * nq_ + point)];
  }
  /// d/dxi (component 0) or d/deta (component 1) on the reference square.
  [[nodiscard]] double grad_ref(int basis, int point, int component) const {
    return grads_[static_cast<std::size_t>((basis * nq_ + point) * 2 + component)];
  }

private:
  LagrangeDegree degree_;
  int nb_;
  int nq_;
  std::vector<double> values_;
  std::vector<double> grads_;
};

ShapeTable q2_shapes_at(const QuadratureRule& rule);
ShapeTable q1_shapes_at(const QuadratureRule& rule);

/// Reference node coordinates for the lattice of the given degree, in basis order.
std::vector<Point2> reference_nodes(LagrangeDegree degree);

/// Evaluate every basis function (and reference gradient) at one reference point.
void lagrange_basis(LagrangeDegree degree, Point2 ref, std::vector<double>& values,
                    std::vector<std::array<double, 2>>* grads = nullptr);

/// Affine map data for an axis-aligned square cell.
struct CellMap {
  double grad_scale = 0.0;  // physical gradient = reference gradient * grad_scale
  double det_jacobian = 0.0;
  CellGeometry geometry;

  [[nodiscard]] Point2 to_physical(Point2 ref) const {
    return {geometry.x0 + 0.5 * geometry.h * (ref.x + 1.0),
            geometry.y0 + 0.5 * geometry.h * (ref.y + 1.0)};
  }
};

/// Throws std::invalid_argument when the cell has non-positive side length.
CellMap map_cell(const CellGeometry& cell);

/// Physical gradients of every basis at every point of the table, laid out as
/// [basis][point][2], together with the cell map.
struct PhysicalGradients {
  CellMap map;
  std::vector<double> grads;

  [[nodiscard]] double grad(int basis, int point, int component, int num_points) const {
    return grads[static_cast<std::size_t>((basis * num_points + point) * 2 + component)];
  }
};

PhysicalGradients map_gradients(const CellGeometry& cell, const ShapeTable& table);

}  // namespace nematic
