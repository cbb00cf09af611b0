#include "nematic/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace nematic {

namespace {

constexpr double kPi = std::numbers::pi;

BoundaryFunction constant_bc(Vec3 v) {
  return [v](double) { return v; };
}

}  // namespace

ProblemSpec problem_uniform() {
  ProblemSpec p;
  p.name = "uniform";
  p.material = {1.0, 1.0, 1.0, 0.0};
  p.bc_lower = constant_bc(Vec3(1.0, 0.0, 0.0));
  p.bc_upper = constant_bc(Vec3(1.0, 0.0, 0.0));
  p.exact = ExactSolution{[](double, double) { return Vec3(1.0, 0.0, 0.0); },
                          [](double, double) { return Grad3x2::Zero().eval(); }};
  return p;
}

ProblemSpec problem_twist() {
  ProblemSpec p;
  p.name = "twist";
  p.material = {1.0, 1.2, 1.0, 0.0};
  p.bc_lower = constant_bc(Vec3(1.0, 0.0, 0.0));
  p.bc_upper = constant_bc(Vec3(0.0, 0.0, 1.0));
  // n = (cos phi, 0, sin phi), phi = pi y / 2.
  p.exact = ExactSolution{
      [](double, double y) {
        const double phi = 0.5 * kPi * y;
        return Vec3(std::cos(phi), 0.0, std::sin(phi));
      },
      [](double, double y) {
        const double phi = 0.5 * kPi * y;
        Grad3x2 g = Grad3x2::Zero();
        g(0, 1) = -0.5 * kPi * std::sin(phi);
        g(2, 1) = 0.5 * kPi * std::cos(phi);
        return g;
      }};
  return p;
}

double nano_pattern_angle(double x, double r, double s) {
  const double arg = 2.0 * kPi * (x + r);
  const double sn = std::sin(arg);
  const double cs = std::cos(arg);
  const double xm = -s * sn / (-s * cs - 1.0);
  const double xp = -s * sn / (-s * cs + 1.0);
  return r * (kPi + 2.0 * std::atan(xm) - 2.0 * std::atan(xp));
}

ProblemSpec problem_nano() {
  ProblemSpec p;
  p.name = "nano";
  p.material = {1.0, 0.62903, 1.32258, 0.0};
  const BoundaryFunction pattern = [](double x) {
    const double theta = nano_pattern_angle(x);
    return Vec3(0.0, std::cos(theta), std::sin(theta));
  };
  p.bc_lower = pattern;
  p.bc_upper = pattern;
  return p;
}

ProblemSpec problem_custom(const MaterialParams& mat, const Vec3& lower, const Vec3& upper) {
  ProblemSpec p;
  p.name = "custom";
  p.material = mat;
  p.bc_lower = constant_bc(lower.normalized());
  p.bc_upper = constant_bc(upper.normalized());
  return p;
}

Vec3 slerp(const Vec3& a, const Vec3& b, double t) {
  const double c = std::clamp(a.dot(b), -1.0, 1.0);
  const double theta = std::acos(c);
  if (theta < 1e-12) return a;
  Vec3 axis_dir;
  if (kPi - theta < 1e-12) {
    // Antipodal: any unit vector perpendicular to a spans the rotation plane.
    Vec3 trial = std::abs(a.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    axis_dir = (trial - trial.dot(a) * a).normalized();
  } else {
    axis_dir = (b - c * a).normalized();
  }
  return std::cos(t * theta) * a + std::sin(t * theta) * axis_dir;
}

DirectorFunction default_initial_guess(const ProblemSpec& spec, const GuessOptions& opts) {
  // In-plane (x, y components) noise drawn at the Q2 nodes of a grid with
  // coarse_n / 2 cells per side, zero on the Dirichlet nodes, read back
  // through that grid's Q2 interpolant.
  const int n = std::max(spec.coarse_n / 2, 1);
  const int m = 2 * n;
  const bool periodic = spec.periodic_x;
  const int cols = periodic ? m : m + 1;
  auto noise = std::make_shared<std::vector<Eigen::Vector2d>>(
      static_cast<std::size_t>(cols * (m + 1)), Eigen::Vector2d::Zero());
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int J = 0; J <= m; ++J) {
    for (int I = 0; I < cols; ++I) {
      const double u = unit(rng);
      const double v = unit(rng);
      const bool fixed = J == 0 || J == m || (!periodic && (I == 0 || I == m));
      if (!fixed) (*noise)[static_cast<std::size_t>(J * cols + I)] = Eigen::Vector2d(u, v);
    }
  }
  const double a = opts.perturbation;
  const BoundaryFunction lower = spec.bc_lower;
  const BoundaryFunction upper = spec.bc_upper;
  return [=](double x, double y) {
    const Vec3 a0 = lower(x).normalized();
    const Vec3 a1 = upper(x).normalized();
    Vec3 dir = (1.0 - y) * a0 + y * a1;
    dir = dir.norm() > 1e-8 ? dir.normalized() : slerp(a0, a1, y);
    if (a == 0.0) return dir;
    const int ci = std::clamp(static_cast<int>(std::floor(x * n)), 0, n - 1);
    const int cj = std::clamp(static_cast<int>(std::floor(y * n)), 0, n - 1);
    const Point2 ref{2.0 * (x * n - ci) - 1.0, 2.0 * (y * n - cj) - 1.0};
    std::vector<double> phi;
    lagrange_basis(LagrangeDegree::Q2, ref, phi);
    Eigen::Vector2d p = Eigen::Vector2d::Zero();
    for (int ly = 0; ly <= 2; ++ly) {
      for (int lx = 0; lx <= 2; ++lx) {
        int I = 2 * ci + lx;
        if (periodic && I == m) I = 0;
        const int J = 2 * cj + ly;
        p += phi[static_cast<std::size_t>(3 * ly + lx)] *
             (*noise)[static_cast<std::size_t>(J * cols + I)];
      }
    }
    dir.x() += a * p.x();
    dir.y() += a * p.y();
    return Vec3(dir.normalized());
  };
}

Vec3 boundary_value(const ProblemSpec& spec, const DirectorFunction& guess, double x, double y) {
  if (y == 0.0) return spec.bc_lower(x);
  if (y == 1.0) return spec.bc_upper(x);
  return guess(x, y);
}

NematicState make_initial_state(const ProblemSpec& spec, std::shared_ptr<const Discretization> disc,
                                const GuessOptions& opts) {
  const DirectorFunction guess = resolve_initial_guess(spec, opts);
  NematicState s;
  s.disc = std::move(disc);
  s.material = spec.material;
  s.director = interpolate_director(s.dofs(), guess);
  impose_boundary_values(spec, guess, s);
  s.lambda = FieldVector{FieldKind::Lambda, Eigen::VectorXd::Zero(s.dofs().n_lambda_dofs())};
  return s;
}

void impose_boundary_values(const ProblemSpec& spec, const DirectorFunction& guess,
                            NematicState& state) {
  const DofMap& dm = state.dofs();
  for (int node = 0; node < dm.num_nodes(); ++node) {
    if (!dm.is_dirichlet(3 * node)) continue;
    const Point2 p = dm.node_coords(node);
    state.director.values.segment<3>(3 * node) = boundary_value(spec, guess, p.x, p.y);
  }
}

DirectorFunction resolve_initial_guess(const ProblemSpec& spec, const GuessOptions& opts) {
  return spec.initial_guess ? spec.initial_guess : default_initial_guess(spec, opts);
}

}  // namespace nematic
