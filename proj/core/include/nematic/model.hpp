#pragma once

// Pointwise Frank-Oseen physics in the slab reduction (d/dz = 0).
//
// Forms follow the halved Newton system: with the discrete Lagrangian
//   L(n, l) = E(n) + 1/2 * int l (|n|^2 - 1),
//   E(n)    = int 1/2 K1 (div n)^2 + 1/2 K3 (Z(n) curl n) . curl n,
// residual_integrand is dL/dn[v], hessian_integrand is d2L/dn2[u, v] and
// coupling_integrand is d2L/dn dl[v, g].  The saddle-splay (K2 + K4) terms
// are dropped: they integrate to a boundary constant under Dirichlet and
// periodic conditions.

#include <Eigen/Core>

namespace nematic {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Grad3x2 = Eigen::Matrix<double, 3, 2>;  // (component, d/dx | d/dy)

struct MaterialParams {
  double K1 = 1.0;
  double K2 = 1.0;
  double K3 = 1.0;
  double K4 = 0.0;  // unused: null Lagrangian under Dirichlet/periodic data

  [[nodiscard]] double kappa() const noexcept { return K2 / K3; }
};

/// Throws std::invalid_argument unless K1, K2, K3 > 0.
void validate(const MaterialParams& mat);

/// Director value, gradient and derived slab operators at one point.
struct PointState {
  Vec3 n = Vec3::Zero();
  Grad3x2 grad = Grad3x2::Zero();
  double div = 0.0;
  Vec3 curl = Vec3::Zero();
  double lambda = 0.0;
};

/// div = dn1/dx + dn2/dy, curl = (dn3/dy, -dn3/dx, dn2/dx - dn1/dy).
inline PointState make_point_state(const Vec3& n, const Grad3x2& grad, double lambda) {
  PointState p;
  p.n = n;
  p.grad = grad;
  p.div = grad(0, 0) + grad(1, 1);
  p.curl = Vec3(grad(2, 1), -grad(2, 0), grad(1, 0) - grad(0, 1));
  p.lambda = lambda;
  return p;
}

/// A vector-valued test or trial function sampled at a point.
struct VectorSample {
  Vec3 value = Vec3::Zero();
  double div = 0.0;
  Vec3 curl = Vec3::Zero();
};

/// phi * e_component, with phi's physical gradient (dphi/dx, dphi/dy).
inline VectorSample component_sample(int component, double phi, double dphi_dx, double dphi_dy) {
  VectorSample s;
  s.value[component] = phi;
  switch (component) {
    case 0:
      s.div = dphi_dx;
      s.curl = Vec3(0.0, 0.0, -dphi_dy);
      break;
    case 1:
      s.div = dphi_dy;
      s.curl = Vec3(0.0, 0.0, dphi_dx);
      break;
    default:
      s.div = 0.0;
      s.curl = Vec3(dphi_dy, -dphi_dx, 0.0);
      break;
  }
  return s;
}

/// Z = I - (1 - kappa) n n^T.
inline Mat3 z_matrix(const Vec3& n, double kappa) {
  return Mat3::Identity() - (1.0 - kappa) * (n * n.transpose());
}

/// 1/2 K1 (div n)^2 + 1/2 K3 (Z curl n) . curl n.
inline double energy_density(const PointState& p, const MaterialParams& mat) {
  const double ncn = p.n.dot(p.curl);
  const double zcc = mat.K3 * p.curl.squaredNorm() + (mat.K2 - mat.K3) * ncn * ncn;
  return 0.5 * mat.K1 * p.div * p.div + 0.5 * zcc;
}

/// Director block of the Lagrangian gradient in direction v.
inline double residual_integrand(const PointState& p, const VectorSample& v,
                                 const MaterialParams& mat) {
  const double ncn = p.n.dot(p.curl);
  // K3 (Z cn) . cv = K3 cn.cv + (K2 - K3)(n.cn)(n.cv)
  const double zterm = mat.K3 * p.curl.dot(v.curl) + (mat.K2 - mat.K3) * ncn * p.n.dot(v.curl);
  return mat.K1 * p.div * v.div + zterm + (mat.K2 - mat.K3) * ncn * v.value.dot(p.curl) +
         p.lambda * p.n.dot(v.value);
}

/// Multiplier block of the Lagrangian gradient in direction gamma.
inline double multiplier_residual_integrand(const PointState& p, double gamma) {
  return 0.5 * gamma * (p.n.squaredNorm() - 1.0);
}

/// Symmetric bilinear form a(u, v) at a point; swapping u
/// and v reproduces the value bit for bit.
inline double hessian_integrand(const PointState& p, const VectorSample& u, const VectorSample& v,
                                const MaterialParams& mat) {
  const Vec3& n = p.n;
  const Vec3& cn = p.curl;
  const double ncn = n.dot(cn);
  const double n_cu = n.dot(u.curl);
  const double n_cv = n.dot(v.curl);
  const double u_cn = u.value.dot(cn);
  const double v_cn = v.value.dot(cn);
  const double dk = mat.K2 - mat.K3;

  const double div_term = mat.K1 * (u.div * v.div);
  const double z_term = mat.K3 * u.curl.dot(v.curl) + dk * (n_cu * n_cv);
  const double coupled = ncn * (u.value.dot(v.curl) + v.value.dot(u.curl)) +
                         (n_cv * u_cn + n_cu * v_cn) + u_cn * v_cn;
  return div_term + z_term + dk * coupled + p.lambda * u.value.dot(v.value);
}

/// b(v, gamma) integrand: gamma (n . v).
inline double coupling_integrand(const PointState& p, const VectorSample& v, double gamma) {
  return gamma * p.n.dot(v.value);
}

}  // namespace nematic
