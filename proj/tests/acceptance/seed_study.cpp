// Final energies of the three benchmarks under several perturbation seeds.

#include <cmath>
#include <cstdio>

#include "nematic/solver.hpp"

using namespace nematic;

int main() {
  struct Band {
    ProblemSpec spec;
    double lo, hi;
  };
  const Band bands[] = {{problem_uniform(), -1.0, 1e-8},
                        {problem_twist(), 1.479, 1.481},
                        {problem_nano(), 3.870, 3.910}};
  int failures = 0;
  for (const Band& b : bands) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      SolveOptions o;
      o.guess = {0.3, seed};
      bool ok = false;
      double energy = std::nan("");
      int fine_iters = -1;
      try {
        const SolveResult r = solve_problem(b.spec, NewtonConfig{}, o);
        const LevelRecord& f = r.log.levels.back();
        energy = f.energy;
        fine_iters = f.newton_iters;
        ok = f.converged && energy >= b.lo && energy <= b.hi;
      } catch (const std::exception& e) {
        std::printf("  %s seed %llu: %s\n", b.spec.name.c_str(), static_cast<unsigned long long>(seed), e.what());
      }
      std::printf("%-8s seed %llu  fine energy %.6f  fine iters %d  %s\n", b.spec.name.c_str(),
                  static_cast<unsigned long long>(seed), energy, fine_iters, ok ? "PASS" : "FAIL");
      std::fflush(stdout);
      if (!ok) ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}
