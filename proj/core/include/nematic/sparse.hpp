#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace nematic {

/// Row-compressed sparsity structure with sorted, duplicate-free columns.
struct SparsityPattern {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_offsets;  // size rows + 1
  std::vector<int> col_indices;

  [[nodiscard]] int nnz() const noexcept { return static_cast<int>(col_indices.size()); }

  /// Position of (row, col) in col_indices, or -1 when structurally zero.
  [[nodiscard]] int find(int row, int col) const;

  /// Union of dense couplings row_sets[e] x col_sets[e] over every element e.
  static SparsityPattern from_elements(int rows, int cols,
                                       const std::vector<std::vector<int>>& row_sets,
                                       const std::vector<std::vector<int>>& col_sets);
};

/// CSR matrix sharing an immutable pattern; values are owned.
class SparseMatrix {
public:
  SparseMatrix() = default;
  explicit SparseMatrix(std::shared_ptr<const SparsityPattern> pattern);

  [[nodiscard]] int rows() const noexcept { return pattern_ ? pattern_->rows : 0; }
  [[nodiscard]] int cols() const noexcept { return pattern_ ? pattern_->cols : 0; }
  [[nodiscard]] int nnz() const noexcept { return pattern_ ? pattern_->nnz() : 0; }
  [[nodiscard]] const SparsityPattern& pattern() const { return *pattern_; }
  [[nodiscard]] const std::shared_ptr<const SparsityPattern>& pattern_ptr() const noexcept {
    return pattern_;
  }

  [[nodiscard]] std::span<double> values() noexcept { return values_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  /// Entry value, 0 for structural zeros.
  [[nodiscard]] double at(int row, int col) const;
  /// Throws std::out_of_range when (row, col) is outside the pattern.
  void add(int row, int col, double value);

  void set_zero();
  [[nodiscard]] Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  [[nodiscard]] Eigen::VectorXd multiply_transpose(const Eigen::VectorXd& x) const;
  [[nodiscard]] Eigen::MatrixXd to_dense() const;
  [[nodiscard]] Eigen::SparseMatrix<double> to_eigen() const;

  /// max |a_ij - a_ji| / max |a_ij|; 0 for an empty matrix.
  [[nodiscard]] double relative_asymmetry() const;

private:
  std::shared_ptr<const SparsityPattern> pattern_;
  std::vector<double> values_;
};

/// Newton step system [[A, B], [B^T, 0]] [dn; dl] = [f; g].
struct SaddleSystem {
  SparseMatrix A;  // director x director
  SparseMatrix B;  // director x multiplier
  Eigen::VectorXd rhs_f;
  Eigen::VectorXd rhs_g;

  [[nodiscard]] int num_director() const noexcept { return A.rows(); }
  [[nodiscard]] int num_multiplier() const noexcept { return B.cols(); }
  /// Nonzeros of the full block matrix (A + B + B^T).
  [[nodiscard]] long long nnz() const noexcept {
    return static_cast<long long>(A.nnz()) + 2LL * B.nnz();
  }

  /// Assembles the full block matrix in Eigen column-major form.
  [[nodiscard]] Eigen::SparseMatrix<double> block_matrix() const;
  [[nodiscard]] Eigen::VectorXd block_rhs() const;
};

}  // namespace nematic
