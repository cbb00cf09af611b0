#include <gtest/gtest.h>

#include <set>

#include "nematic/assembly.hpp"
#include "nematic/problems.hpp"
#include "nematic/solver.hpp"
#include "nematic/space.hpp"

using namespace nematic;

TEST(DofMap, PeriodicQ2Counts) {
  const DofMap d = build_dofmap(build_uniform(4, true));
  EXPECT_EQ(d.num_nodes(), 72);
  EXPECT_EQ(d.n_director_dofs(), 216);
  EXPECT_EQ(d.n_lambda_dofs(), 16);
  EXPECT_EQ(d.dirichlet_dofs().size(), 48u);
  EXPECT_EQ(d.free_director_dofs().size(), 168u);
  EXPECT_EQ(d.periodic_pairs().size(), 9u);
}

TEST(DofMap, SingleCellIsAllBoundary) {
  const DofMap d = build_dofmap(build_uniform(1, false));
  EXPECT_EQ(d.n_director_dofs(), 27);
  EXPECT_EQ(d.n_lambda_dofs(), 1);
  EXPECT_EQ(d.dirichlet_dofs().size(), 24u);
  const auto free = d.free_director_dofs();
  ASSERT_EQ(free.size(), 3u);
  EXPECT_EQ(free[0], 12);
}

TEST(DofMap, FinestGridDimension) {
  const DofMap d = build_dofmap(build_uniform(128, true));
  EXPECT_EQ(d.n_director_dofs(), 3 * 256 * 257);
  EXPECT_EQ(d.n_lambda_dofs(), 128 * 128);
}

TEST(DofMap, Q1MultiplierCounts) {
  const DofMap d = build_dofmap(build_uniform(2, false), LagrangeDegree::Q1, MultiplierElement::Q1);
  EXPECT_EQ(d.n_director_dofs(), 27);
  EXPECT_EQ(d.n_lambda_dofs(), 9);
  EXPECT_EQ(d.lambda_per_cell(), 4);
  EXPECT_EQ(d.nodes_per_cell(), 4);
}

TEST(DofMap, CellDofsAreThreePerNode) {
  const DofMap d = build_dofmap(build_uniform(3, true));
  for (int c = 0; c < d.num_cells(); ++c) {
    const auto& nodes = d.cell_nodes(c);
    const auto& dofs = d.cell_dofs(c);
    ASSERT_EQ(nodes.size(), 9u);
    ASSERT_EQ(dofs.size(), 27u);
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      for (int k = 0; k < 3; ++k) EXPECT_EQ(dofs[3 * a + static_cast<std::size_t>(k)], 3 * nodes[a] + k);
    }
    EXPECT_EQ(d.cell_lambda_dofs(c).size(), 1u);
    EXPECT_EQ(d.cell_lambda_dofs(c)[0], c);
  }
}

TEST(DofMap, PeriodicColumnFolds) {
  const DofMap d = build_dofmap(build_uniform(2, true));
  for (int J = 0; J <= 4; ++J) EXPECT_EQ(d.node_id(4, J), d.node_id(0, J));
  // last cell in a row shares its right edge with the first cell's left edge
  std::set<int> left(d.cell_nodes(0).begin(), d.cell_nodes(0).end());
  int shared = 0;
  for (int n : d.cell_nodes(1)) shared += static_cast<int>(left.count(n));
  EXPECT_EQ(shared, 6);
}

TEST(DofMap, DirichletOnlyOnSubstratesWhenPeriodic) {
  const DofMap d = build_dofmap(build_uniform(4, true));
  for (int dof : d.dirichlet_dofs()) {
    const Point2 p = d.node_coords(dof / 3);
    EXPECT_TRUE(p.y == 0.0 || p.y == 1.0);
  }
  for (int dof : d.free_director_dofs()) {
    const Point2 p = d.node_coords(dof / 3);
    EXPECT_GT(p.y, 0.0);
    EXPECT_LT(p.y, 1.0);
  }
}

namespace {

Vec3 biquadratic(double x, double y) {
  return {1.0 + x * y - 2.0 * x * x * y * y, x * x - y, 0.5 * y * y * x + 3.0};
}

}  // namespace

TEST(Interpolation, ReproducesBiquadraticField) {
  const auto disc = make_discretization(build_uniform(3, false));
  const FieldVector f = interpolate_director(disc->dofs, biquadratic);
  EXPECT_EQ(f.kind, FieldKind::Director);
  for (int c = 0; c < disc->mesh.num_cells(); ++c) {
    const CellMap m = map_cell(disc->mesh.cell_geometry(c));
    for (const Point2 r : {Point2{0.3, -0.7}, Point2{-1.0, 0.5}, Point2{0.9, 0.9}}) {
      const auto [v, g] = evaluate_director(*disc, f.values, c, r);
      const Point2 p = m.to_physical(r);
      EXPECT_NEAR((v - biquadratic(p.x, p.y)).norm(), 0.0, 1e-13);
      // d/dx of the first component
      EXPECT_NEAR(g(0, 0), p.y - 4.0 * p.x * p.y * p.y, 1e-12);
      EXPECT_NEAR(g(1, 1), -1.0, 1e-12);
    }
  }
}

TEST(Prolongation, ExactForCoarseField) {
  const ProblemSpec spec = problem_twist();
  const auto coarse = make_discretization(build_uniform(4, true));
  NematicState s = make_initial_state(spec, coarse);
  for (int c = 0; c < coarse->mesh.num_cells(); ++c) s.lambda.values[c] = 0.1 * c - 0.3;
  const auto fine = make_discretization(refine_uniform(coarse->mesh));
  const NematicState f = prolong(s, fine);
  ASSERT_EQ(f.director.values.size(), fine->dofs.n_director_dofs());
  ASSERT_EQ(f.lambda.values.size(), fine->dofs.n_lambda_dofs());
  for (int fc = 0; fc < fine->mesh.num_cells(); ++fc) {
    const int pc = fine->mesh.parent_of()[static_cast<std::size_t>(fc)];
    EXPECT_EQ(f.lambda.values[fc], s.lambda.values[pc]);
    const CellMap fm = map_cell(fine->mesh.cell_geometry(fc));
    const CellMap cm = map_cell(coarse->mesh.cell_geometry(pc));
    for (const Point2 r : {Point2{0.0, 0.0}, Point2{0.4, -0.2}}) {
      const Point2 p = fm.to_physical(r);
      const Point2 rc{(p.x - cm.geometry.x0) * cm.grad_scale - 1.0,
                      (p.y - cm.geometry.y0) * cm.grad_scale - 1.0};
      const auto vf = evaluate_director(*fine, f.director.values, fc, r).first;
      const auto vc = evaluate_director(*coarse, s.director.values, pc, rc).first;
      EXPECT_NEAR((vf - vc).norm(), 0.0, 1e-13);
    }
  }
  EXPECT_NEAR(evaluate_energy(f, 6), evaluate_energy(s, 6), 1e-12);
}

TEST(Prolongation, LineageMismatchThrows) {
  const ProblemSpec spec = problem_uniform();
  const auto a = make_discretization(build_uniform(4, true));
  const NematicState s = make_initial_state(spec, a);
  EXPECT_THROW(prolong(s, make_discretization(build_uniform(4, true))), std::invalid_argument);
  EXPECT_THROW(prolong(s, make_discretization(refine_uniform(build_uniform(4, false)))),
               std::invalid_argument);
}

TEST(Dirichlet, EliminationKeepsSymmetryAndFixesBoundary) {
  const ProblemSpec spec = problem_twist();
  const auto disc = make_discretization(build_uniform(4, true));
  NematicState s = make_initial_state(spec, disc, {0.3, 7});
  AssemblyOptions raw;
  raw.apply_constraints = false;
  SaddleSystem sys = assemble(s, gauss_rule(3), raw);
  EXPECT_LT(sys.A.relative_asymmetry(), 1e-14);
  apply_dirichlet(disc->dofs, sys);
  EXPECT_LT(sys.A.relative_asymmetry(), 1e-14);
  for (int d : disc->dofs.dirichlet_dofs()) {
    EXPECT_EQ(sys.A.at(d, d), 1.0);
    EXPECT_EQ(sys.rhs_f[d], 0.0);
    for (int l = 0; l < sys.num_multiplier(); ++l) EXPECT_EQ(sys.B.at(d, l), 0.0);
  }
  const auto [dn, dl] = solve_saddle(sys);
  for (int d : disc->dofs.dirichlet_dofs()) EXPECT_EQ(dn.values[d], 0.0);
  EXPECT_EQ(dl.kind, FieldKind::Lambda);
}
