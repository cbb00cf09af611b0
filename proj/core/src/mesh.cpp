#include "nematic/mesh.hpp"

#include <stdexcept>
#include <string>

namespace nematic {

namespace {

void fill_geometry(int n, std::vector<Point2>& vertices,
                   std::vector<std::array<int, 4>>& cells) {
  const double h = 1.0 / n;
  vertices.resize(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      // i == n pinned to exactly 1.0 so periodic partners share y and x is exact.
      vertices[static_cast<std::size_t>(j * (n + 1) + i)] =
          Point2{i == n ? 1.0 : i * h, j == n ? 1.0 : j * h};
    }
  }
  cells.resize(static_cast<std::size_t>(n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v0 = j * (n + 1) + i;
      cells[static_cast<std::size_t>(j * n + i)] = {v0, v0 + 1, v0 + n + 2, v0 + n + 1};
    }
  }
}

}  // namespace

CellGeometry Mesh::cell_geometry(int cell) const {
  if (cell < 0 || cell >= num_cells()) {
    throw std::out_of_range("cell index " + std::to_string(cell) + " out of range");
  }
  const int i = cell % n_;
  const int j = cell / n_;
  return CellGeometry{i * h(), j * h(), h()};
}

std::array<int, 4> Mesh::children_of(int coarse_cell) const {
  // Children of coarse cell (I, J) live at (2I + a, 2J + b) in this mesh's
  // parent numbering; coarse mesh has n_/2 cells per side.
  const int nc = n_ / 2;
  const int ci = coarse_cell % nc;
  const int cj = coarse_cell / nc;
  return {cell_index(2 * ci, 2 * cj), cell_index(2 * ci + 1, 2 * cj),
          cell_index(2 * ci + 1, 2 * cj + 1), cell_index(2 * ci, 2 * cj + 1)};
}

int Mesh::periodic_partner(int vertex) const {
  if (!periodic_x_) return -1;
  const int i = vertex % (n_ + 1);
  if (i != n_) return -1;
  return vertex - n_;
}

Mesh build_uniform(int n, bool periodic_x) {
  if (n < 1) {
    throw std::invalid_argument("build_uniform: n must be >= 1, got " + std::to_string(n));
  }
  Mesh m;
  m.n_ = n;
  m.coarse_n_ = n;
  m.level_ = 0;
  m.periodic_x_ = periodic_x;
  fill_geometry(n, m.vertices_, m.cells_);
  return m;
}

Mesh refine_uniform(const Mesh& coarse) {
  Mesh m;
  const int n = 2 * coarse.n_;
  m.n_ = n;
  m.coarse_n_ = coarse.coarse_n_;
  m.level_ = coarse.level_ + 1;
  m.periodic_x_ = coarse.periodic_x_;
  fill_geometry(n, m.vertices_, m.cells_);
  m.parent_.resize(static_cast<std::size_t>(n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      m.parent_[static_cast<std::size_t>(j * n + i)] = (j / 2) * coarse.n_ + i / 2;
    }
  }
  return m;
}

bool is_refinement_of(const Mesh& fine, const Mesh& coarse) {
  return fine.cells_per_side() == 2 * coarse.cells_per_side() &&
         fine.periodic_x() == coarse.periodic_x() && fine.level() == coarse.level() + 1 &&
         fine.coarse_cells_per_side() == coarse.coarse_cells_per_side() &&
         static_cast<int>(fine.parent_of().size()) == fine.num_cells();
}

}  // namespace nematic
