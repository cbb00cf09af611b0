#include "nematic/elements.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nematic {

namespace {

// P_n(z) and P_n'(z) by the three-term recurrence (n >= 1).
void legendre(int n, double z, double& p, double& dp) {
  double p0 = 1.0;
  double p1 = z;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  p = p1;
  dp = n * (z * p1 - p0) / (z * z - 1.0);
}

// Gauss-Legendre nodes (ascending) and weights on [-1, 1], n >= 2.
void gauss_legendre_1d(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p = 0.0;
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      legendre(n, z, p, dp);
      const double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    legendre(n, z, p, dp);
    x[static_cast<std::size_t>(n - 1 - i)] = z;
    w[static_cast<std::size_t>(n - 1 - i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n % 2 == 1) x[static_cast<std::size_t>(n / 2)] = 0.0;
}

// 1-D Lagrange basis on equispaced nodes of [-1, 1].
void lagrange_1d(int degree, double t, double* v, double* d) {
  if (degree == 1) {
    v[0] = 0.5 * (1.0 - t);
    v[1] = 0.5 * (1.0 + t);
    d[0] = -0.5;
    d[1] = 0.5;
  } else {
    v[0] = 0.5 * t * (t - 1.0);
    v[1] = 1.0 - t * t;
    v[2] = 0.5 * t * (t + 1.0);
    d[0] = t - 0.5;
    d[1] = -2.0 * t;
    d[2] = t + 0.5;
  }
}

}  // namespace

QuadratureRule gauss_rule(int order) {
  if (order < 1 || order > 6) {
    throw std::invalid_argument("gauss_rule: unsupported order " + std::to_string(order) +
                                " (expected 1..6)");
  }
  std::vector<double> x;
  std::vector<double> w;
  if (order == 1) {
    x = {0.0};
    w = {2.0};
  } else {
    gauss_legendre_1d(order, x, w);
  }
  QuadratureRule rule;
  rule.order = order;
  for (int j = 0; j < order; ++j) {
    for (int i = 0; i < order; ++i) {
      rule.points.push_back({x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(j)]});
      rule.weights.push_back(w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)]);
    }
  }
  return rule;
}

void lagrange_basis(LagrangeDegree degree, Point2 ref, std::vector<double>& values,
                    std::vector<std::array<double, 2>>* grads) {
  const int p = static_cast<int>(degree);
  const int m = p + 1;
  double vx[3], dx[3], vy[3], dy[3];
  lagrange_1d(p, ref.x, vx, dx);
  lagrange_1d(p, ref.y, vy, dy);
  values.resize(static_cast<std::size_t>(m * m));
  if (grads) grads->resize(static_cast<std::size_t>(m * m));
  for (int ly = 0; ly < m; ++ly) {
    for (int lx = 0; lx < m; ++lx) {
      const auto a = static_cast<std::size_t>(ly * m + lx);
      values[a] = vx[lx] * vy[ly];
      if (grads) (*grads)[a] = {dx[lx] * vy[ly], vx[lx] * dy[ly]};
    }
  }
}

std::vector<Point2> reference_nodes(LagrangeDegree degree) {
  const int p = static_cast<int>(degree);
  std::vector<Point2> nodes;
  for (int ly = 0; ly <= p; ++ly) {
    for (int lx = 0; lx <= p; ++lx) {
      nodes.push_back({-1.0 + 2.0 * lx / p, -1.0 + 2.0 * ly / p});
    }
  }
  return nodes;
}

ShapeTable::ShapeTable(LagrangeDegree degree, const QuadratureRule& rule)
    : degree_(degree),
      nb_((static_cast<int>(degree) + 1) * (static_cast<int>(degree) + 1)),
      nq_(rule.size()),
      values_(static_cast<std::size_t>(nb_ * nq_)),
      grads_(static_cast<std::size_t>(nb_ * nq_ * 2)) {
  std::vector<double> v;
  std::vector<std::array<double, 2>> g;
  for (int q = 0; q < nq_; ++q) {
    lagrange_basis(degree, rule.points[static_cast<std::size_t>(q)], v, &g);
    for (int a = 0; a < nb_; ++a) {
      values_[static_cast<std::size_t>(a * nq_ + q)] = v[static_cast<std::size_t>(a)];
      grads_[static_cast<std::size_t>((a * nq_ + q) * 2)] = g[static_cast<std::size_t>(a)][0];
      grads_[static_cast<std::size_t>((a * nq_ + q) * 2 + 1)] = g[static_cast<std::size_t>(a)][1];
    }
  }
}

ShapeTable q2_shapes_at(const QuadratureRule& rule) { return ShapeTable(LagrangeDegree::Q2, rule); }
ShapeTable q1_shapes_at(const QuadratureRule& rule) { return ShapeTable(LagrangeDegree::Q1, rule); }

CellMap map_cell(const CellGeometry& cell) {
  if (!(cell.h > 0.0) || !std::isfinite(cell.h)) {
    throw std::invalid_argument("map_cell: degenerate cell with side " + std::to_string(cell.h));
  }
  return CellMap{2.0 / cell.h, 0.25 * cell.h * cell.h, cell};
}

PhysicalGradients map_gradients(const CellGeometry& cell, const ShapeTable& table) {
  PhysicalGradients out;
  out.map = map_cell(cell);
  const int nb = table.num_basis();
  const int nq = table.num_points();
  out.grads.resize(static_cast<std::size_t>(nb * nq * 2));
  for (int a = 0; a < nb; ++a) {
    for (int q = 0; q < nq; ++q) {
      for (int c = 0; c < 2; ++c) {
        out.grads[static_cast<std::size_t>((a * nq + q) * 2 + c)] =
            table.grad_ref(a, q, c) * out.map.grad_scale;
      }
    }
  }
  return out;
}

}  // namespace nematic
