#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "nematic/model.hpp"
#include "nematic/space.hpp"

namespace nematic {

using BoundaryFunction = std::function<Vec3(double x)>;

/// Analytic equilibrium with its gradient, when one is known.
struct ExactSolution {
  DirectorFunction value;
  std::function<Grad3x2(double x, double y)> gradient;
};

/// Slab between substrates at y = 0 and y = 1 (distance 1), periodic in x.
struct ProblemSpec {
  std::string name;
  MaterialParams material;
  BoundaryFunction bc_lower;  // director on y = 0
  BoundaryFunction bc_upper;  // director on y = 1
  bool periodic_x = true;
  int coarse_n = 4;
  int levels = 6;
  /// Overrides default_initial_guess when set.
  DirectorFunction initial_guess;
  std::optional<ExactSolution> exact;
};

/// K1 = K2 = K3 = 1, n = (1, 0, 0) on both substrates.
ProblemSpec problem_uniform();
/// K = (1, 1.2, 1), n = (1, 0, 0) on y = 0 and (0, 0, 1) on y = 1.
ProblemSpec problem_twist();
/// K = (1, 0.62903, 1.32258), nano-patterned anchoring on both substrates.
ProblemSpec problem_nano();
/// Constant anchoring directions (normalized), material as given.
ProblemSpec problem_custom(const MaterialParams& mat, const Vec3& lower, const Vec3& upper);

/// Pattern angle theta(x) = r (pi + 2 atan X_m - 2 atan X_p) with
///   X_m = -s sin(2 pi (x + r)) / (-s cos(2 pi (x + r)) - 1),
///   X_p = -s sin(2 pi (x + r)) / (-s cos(2 pi (x + r)) + 1).
double nano_pattern_angle(double x, double r = 0.25, double s = 0.95);

struct GuessOptions {
  double perturbation = 0.3;
  std::uint64_t seed = 0;
};

/// Spherical interpolation between unit vectors a and b at t in [0, 1].
/// Antipodal endpoints rotate through an arbitrary perpendicular axis.
Vec3 slerp(const Vec3& a, const Vec3& b, double t);

/// Linear-in-y blend of the two substrate directions, renormalized (slerp
/// where the blend vanishes), plus an in-plane (x, y components)
/// perturbation, then normalized pointwise.
///
/// The perturbation is seeded uniform noise in [-a, a] per component at the
/// interior Q2 nodes of a grid with coarse_n / 2 cells per side (at least
/// one), evaluated through that grid's Q2 interpolant, so it is smooth at
/// the coarse scale and vanishes on the Dirichlet boundary.
DirectorFunction default_initial_guess(const ProblemSpec& spec, const GuessOptions& opts = {});

/// spec.initial_guess when set, default_initial_guess otherwise.
DirectorFunction resolve_initial_guess(const ProblemSpec& spec, const GuessOptions& opts = {});

/// Interpolated guess with exact boundary data on the Dirichlet nodes and a
/// zero multiplier.
NematicState make_initial_state(const ProblemSpec& spec, std::shared_ptr<const Discretization> disc,
                                const GuessOptions& opts = {});

/// Overwrites every Dirichlet director node with boundary_value().
void impose_boundary_values(const ProblemSpec& spec, const DirectorFunction& guess,
                            NematicState& state);

/// Boundary value for a Dirichlet node at (x, y): bc_lower/bc_upper on the
/// substrates, the initial guess elsewhere (x-sides of non-periodic meshes).
Vec3 boundary_value(const ProblemSpec& spec, const DirectorFunction& guess, double x, double y);

}  // namespace nematic
