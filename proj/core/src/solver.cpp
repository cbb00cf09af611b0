#include "nematic/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "nematic/errors.hpp"

namespace nematic {

void NewtonConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be positive");
  if (!(omega0 > 0.0 && omega0 <= 1.0)) throw std::invalid_argument("omega0 must lie in (0, 1]");
  if (!(omega_max >= omega0 && omega_max <= 1.0)) {
    throw std::invalid_argument("omega_max must lie in [omega0, 1]");
  }
  if (omega_step < 0.0) throw std::invalid_argument("omega_step must be non-negative");
  if (min_refined_iters < 0 || min_refined_iters > max_iters) {
    throw std::invalid_argument("min_refined_iters must lie in [0, max_iters]");
  }
  if (quadrature_order < 1 || quadrature_order > 6) {
    throw std::invalid_argument("quadrature_order must lie in 1..6");
  }
}

double damping_for_level(const NewtonConfig& cfg, int level) {
  return std::min(cfg.omega0 + cfg.omega_step * level, cfg.omega_max);
}

void RunLog::finalize() {
  work_units = 0.0;
  if (levels.empty()) return;
  const double finest = static_cast<double>(levels.back().nnz);
  for (const auto& r : levels) {
    work_units += r.newton_iters * static_cast<double>(r.nnz) / finest;
  }
}

double evaluate_energy(const NematicState& state, int quadrature_order) {
  const QuadratureRule rule = gauss_rule(quadrature_order);
  double e = 0.0;
  for_each_quadrature_point(state, rule, [&](int, const PointState& p, double jxw) {
    e += energy_density(p, state.material) * jxw;
  });
  return e;
}

LengthDeviation length_deviation(const NematicState& state, int quadrature_order) {
  const QuadratureRule rule = gauss_rule(quadrature_order);
  LengthDeviation d{std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity()};
  for_each_quadrature_point(state, rule, [&](int, const PointState& p, double) {
    const double dev = p.n.squaredNorm() - 1.0;
    d.min = std::min(d.min, dev);
    d.max = std::max(d.max, dev);
  });
  return d;
}

LevelResult newton_solve_level(NematicState state, const NewtonConfig& cfg, double omega,
                               int level, int min_iters) {
  const QuadratureRule rule = gauss_rule(cfg.quadrature_order);
  SaddleSolver solver;
  LevelRecord rec;
  rec.level = level;
  rec.cells_per_side = state.mesh().cells_per_side();
  rec.omega = omega;

  int iters = 0;
  for (;;) {
    SaddleSystem sys = assemble(state, rule);
    const double res = residual_norm(sys);
    if (!std::isfinite(res)) {
      throw DivergenceError("non-finite residual on level " + std::to_string(level) +
                            " after " + std::to_string(iters) + " Newton steps");
    }
    if (iters == 0) {
      rec.initial_residual = res;
      rec.nnz = sys.nnz();
    }
    rec.final_residual = res;
    rec.converged = res < cfg.tol;
    if (rec.converged && iters >= min_iters) break;
    if (iters == cfg.max_iters) break;
    auto [dn, dl] = solver.solve(sys);
    state.director.values += omega * dn.values;
    state.lambda.values += omega * dl.values;
    ++iters;
  }
  rec.newton_iters = iters;
  const LengthDeviation dev = length_deviation(state, cfg.quadrature_order);
  rec.min_dev = dev.min;
  rec.max_dev = dev.max;
  rec.energy = evaluate_energy(state, cfg.quadrature_order);
  return {std::move(state), rec};
}

SolveResult solve_problem(const ProblemSpec& spec, const NewtonConfig& cfg,
                          const SolveOptions& options) {
  cfg.validate();
  validate(spec.material);
  if (spec.levels < 1) throw std::invalid_argument("levels must be at least 1");
  if (spec.coarse_n < 1) throw std::invalid_argument("coarse grid must have at least one cell");

  const DirectorFunction guess = resolve_initial_guess(spec, options.guess);
  SolveResult out;
  auto emit = [&](LevelResult&& r) {
    if (options.on_level) options.on_level(r.record);
    out.log.levels.push_back(r.record);
    if (options.keep_levels) out.level_states.push_back(r.state);
    out.state = std::move(r.state);
  };

  auto disc = make_discretization(build_uniform(spec.coarse_n, spec.periodic_x));
  NematicState s = make_initial_state(spec, disc, options.guess);

  if (!options.nested) {
    // same discrete starting field as the nested run, carried to the finest grid
    for (int l = 1; l < spec.levels; ++l) {
      s = prolong(s, make_discretization(refine_uniform(s.mesh())));
    }
    impose_boundary_values(spec, guess, s);
    emit(newton_solve_level(std::move(s), cfg, cfg.omega0, spec.levels - 1));
    out.log.finalize();
    return out;
  }

  for (int l = 0; l < spec.levels; ++l) {
    if (l > 0) {
      auto fine = make_discretization(refine_uniform(out.state.mesh()));
      s = prolong(out.state, fine);
      impose_boundary_values(spec, guess, s);
    }
    emit(newton_solve_level(std::move(s), cfg, damping_for_level(cfg, l), l,
                            l > 0 ? cfg.min_refined_iters : 0));
  }
  out.log.finalize();
  return out;
}

}  // namespace nematic
