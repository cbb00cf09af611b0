#pragma once

#include <array>
#include <vector>

namespace nematic {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned square cell: lower-left corner and side length.
struct CellGeometry {
  double x0 = 0.0;
  double y0 = 0.0;
  double h = 0.0;
};

/// Uniform n x n grid of square cells on the unit square.
///
/// Vertices are numbered row-major from the lower-left corner,
/// v(i, j) = j * (n + 1) + i, and cells likewise, c(i, j) = j * n + i.
/// Cell corners are stored counter-clockwise starting at the lower-left.
/// With periodic_x the vertices at x = 0 and x = 1 remain distinct in the
/// geometry; the identification happens in the DOF map.
class Mesh {
public:
  [[nodiscard]] int cells_per_side() const noexcept { return n_; }
  [[nodiscard]] int num_cells() const noexcept { return n_ * n_; }
  [[nodiscard]] int num_vertices() const noexcept { return (n_ + 1) * (n_ + 1); }
  [[nodiscard]] double h() const noexcept { return 1.0 / n_; }
  [[nodiscard]] bool periodic_x() const noexcept { return periodic_x_; }
  [[nodiscard]] int level() const noexcept { return level_; }
  [[nodiscard]] int coarse_cells_per_side() const noexcept { return coarse_n_; }

  [[nodiscard]] const std::vector<Point2>& vertices() const noexcept { return vertices_; }
  [[nodiscard]] const std::vector<std::array<int, 4>>& cells() const noexcept { return cells_; }

  [[nodiscard]] CellGeometry cell_geometry(int cell) const;
  [[nodiscard]] int cell_index(int i, int j) const noexcept { return j * n_ + i; }

  /// Parent cell in the coarser mesh this one was refined from; empty on
  /// the coarsest level.
  [[nodiscard]] const std::vector<int>& parent_of() const noexcept { return parent_; }
  [[nodiscard]] std::array<int, 4> children_of(int coarse_cell) const;

  /// Vertex at x = 0 identified with the given x = 1 vertex, or -1 when the
  /// vertex is not on the right edge or the mesh is not periodic.
  [[nodiscard]] int periodic_partner(int vertex) const;

  friend Mesh build_uniform(int n, bool periodic_x);
  friend Mesh refine_uniform(const Mesh& coarse);

private:
  Mesh() = default;

  int n_ = 0;
  int coarse_n_ = 0;
  int level_ = 0;
  bool periodic_x_ = false;
  std::vector<Point2> vertices_;
  std::vector<std::array<int, 4>> cells_;
  std::vector<int> parent_;
};

/// Throws std::invalid_argument for n < 1.
Mesh build_uniform(int n, bool periodic_x);

/// Bisects every cell in both directions; the child records its parent.
Mesh refine_uniform(const Mesh& coarse);

/// True when fine is the uniform refinement of coarse.
bool is_refinement_of(const Mesh& fine, const Mesh& coarse);

}  // namespace nematic
