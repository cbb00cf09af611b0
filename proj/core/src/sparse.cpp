#include "nematic/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nematic {

int SparsityPattern::find(int row, int col) const {
  const auto begin = col_indices.begin() + row_offsets[static_cast<std::size_t>(row)];
  const auto end = col_indices.begin() + row_offsets[static_cast<std::size_t>(row) + 1];
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) return -1;
  return static_cast<int>(it - col_indices.begin());
}

SparsityPattern SparsityPattern::from_elements(int rows, int cols,
                                               const std::vector<std::vector<int>>& row_sets,
                                               const std::vector<std::vector<int>>& col_sets) {
  if (row_sets.size() != col_sets.size()) {
    throw std::invalid_argument("from_elements: row/col element lists differ in length");
  }
  std::vector<std::vector<int>> per_row(static_cast<std::size_t>(rows));
  for (std::size_t e = 0; e < row_sets.size(); ++e) {
    for (const int r : row_sets[e]) {
      auto& dst = per_row[static_cast<std::size_t>(r)];
      dst.insert(dst.end(), col_sets[e].begin(), col_sets[e].end());
    }
  }
  SparsityPattern p;
  p.rows = rows;
  p.cols = cols;
  p.row_offsets.assign(static_cast<std::size_t>(rows) + 1, 0);
  for (int r = 0; r < rows; ++r) {
    auto& list = per_row[static_cast<std::size_t>(r)];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    p.row_offsets[static_cast<std::size_t>(r) + 1] =
        p.row_offsets[static_cast<std::size_t>(r)] + static_cast<int>(list.size());
  }
  p.col_indices.reserve(static_cast<std::size_t>(p.row_offsets.back()));
  for (auto& list : per_row) {
    p.col_indices.insert(p.col_indices.end(), list.begin(), list.end());
    std::vector<int>().swap(list);
  }
  return p;
}

SparseMatrix::SparseMatrix(std::shared_ptr<const SparsityPattern> pattern)
    : pattern_(std::move(pattern)), values_(static_cast<std::size_t>(pattern_->nnz()), 0.0) {}

double SparseMatrix::at(int row, int col) const {
  const int k = pattern_->find(row, col);
  return k < 0 ? 0.0 : values_[static_cast<std::size_t>(k)];
}

void SparseMatrix::add(int row, int col, double value) {
  const int k = pattern_->find(row, col);
  if (k < 0) {
    throw std::out_of_range("SparseMatrix::add: (" + std::to_string(row) + ", " +
                            std::to_string(col) + ") not in pattern");
  }
  values_[static_cast<std::size_t>(k)] += value;
}

void SparseMatrix::set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }

Eigen::VectorXd SparseMatrix::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(rows());
  const auto& p = *pattern_;
  for (int r = 0; r < p.rows; ++r) {
    double s = 0.0;
    for (int k = p.row_offsets[static_cast<std::size_t>(r)];
         k < p.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
      s += values_[static_cast<std::size_t>(k)] * x[p.col_indices[static_cast<std::size_t>(k)]];
    }
    y[r] = s;
  }
  return y;
}

Eigen::VectorXd SparseMatrix::multiply_transpose(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(cols());
  const auto& p = *pattern_;
  for (int r = 0; r < p.rows; ++r) {
    for (int k = p.row_offsets[static_cast<std::size_t>(r)];
         k < p.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
      y[p.col_indices[static_cast<std::size_t>(k)]] += values_[static_cast<std::size_t>(k)] * x[r];
    }
  }
  return y;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows(), cols());
  const auto& p = *pattern_;
  for (int r = 0; r < p.rows; ++r) {
    for (int k = p.row_offsets[static_cast<std::size_t>(r)];
         k < p.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
      d(r, p.col_indices[static_cast<std::size_t>(k)]) = values_[static_cast<std::size_t>(k)];
    }
  }
  return d;
}

Eigen::SparseMatrix<double> SparseMatrix::to_eigen() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(values_.size());
  const auto& p = *pattern_;
  for (int r = 0; r < p.rows; ++r) {
    for (int k = p.row_offsets[static_cast<std::size_t>(r)];
         k < p.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
      t.emplace_back(r, p.col_indices[static_cast<std::size_t>(k)],
                     values_[static_cast<std::size_t>(k)]);
    }
  }
  Eigen::SparseMatrix<double> m(rows(), cols());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

double SparseMatrix::relative_asymmetry() const {
  if (!pattern_ || values_.empty()) return 0.0;
  const auto& p = *pattern_;
  double max_abs = 0.0;
  double max_diff = 0.0;
  for (int r = 0; r < p.rows; ++r) {
    for (int k = p.row_offsets[static_cast<std::size_t>(r)];
         k < p.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
      const double v = values_[static_cast<std::size_t>(k)];
      max_abs = std::max(max_abs, std::abs(v));
      max_diff = std::max(max_diff, std::abs(v - at(p.col_indices[static_cast<std::size_t>(k)], r)));
    }
  }
  return max_abs > 0.0 ? max_diff / max_abs : 0.0;
}

Eigen::SparseMatrix<double> SaddleSystem::block_matrix() const {
  const int nd = num_director();
  const int nl = num_multiplier();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(nnz()));
  const auto& pa = A.pattern();
  const auto av = A.values();
  for (int r = 0; r < nd; ++r) {
    for (int k = pa.row_offsets[static_cast<std::size_t>(r)];
         k < pa.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
      t.emplace_back(r, pa.col_indices[static_cast<std::size_t>(k)], av[static_cast<std::size_t>(k)]);
    }
  }
  const auto& pb = B.pattern();
  const auto bv = B.values();
  for (int r = 0; r < nd; ++r) {
    for (int k = pb.row_offsets[static_cast<std::size_t>(r)];
         k < pb.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
      const int c = nd + pb.col_indices[static_cast<std::size_t>(k)];
      const double v = bv[static_cast<std::size_t>(k)];
      t.emplace_back(r, c, v);
      t.emplace_back(c, r, v);
    }
  }
  Eigen::SparseMatrix<double> m(nd + nl, nd + nl);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Eigen::VectorXd SaddleSystem::block_rhs() const {
  Eigen::VectorXd b(num_director() + num_multiplier());
  b << rhs_f, rhs_g;
  return b;
}

}  // namespace nematic
