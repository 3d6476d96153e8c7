#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace cbt;

TEST(GridFixedPoint, IdentityGivesFirstNode) {
  const auto s = uniform_space(2);
  const ConditionalSimplex t = standard_simplex(s, 2);
  const RandomPoint g = grid_fixed_point(LocalFunction::identity(2), t, GridSpec{10});
  // Lexicographically first composition is (0, 0, 10): the last vertex.
  for (std::size_t a = 0; a < 2; ++a) EXPECT_EQ(g.at(a), t.vertex(2).at(a));
}

TEST(GridFixedPoint, ConstantAtNode) {
  const auto s = make_space({1.0});
  const ConditionalSimplex t = standard_simplex(s, 2);
  const Vec c = vec({0.3, 0.5});
  const RandomPoint g = grid_fixed_point(LocalFunction::uniform(2, [c](const Vec&) { return c; }), t, GridSpec{10});
  EXPECT_LT((g.at(0) - c).norm(), 1e-15);
}

TEST(GridFixedPoint, CosineAtFineResolution) {
  const auto s = make_space({1.0});
  const ConditionalSimplex t({RandomPoint::constant(s, vec({0})), RandomPoint::constant(s, vec({1}))});
  const auto f = LocalFunction::uniform(1, [](const Vec& x) { return vec({std::cos(x(0))}); });
  const RandomPoint g = grid_fixed_point(f, t, GridSpec{100000});
  EXPECT_NEAR(g.at(0)(0), 0.73909, 1e-5);
  const RandomScalar b = bisection_root([](std::size_t, double x) { return std::cos(x) - x; }, RandomScalar::constant(s, 0),
                                        RandomScalar::constant(s, 1), 1e-14);
  EXPECT_NEAR(g.at(0)(0), b[0], 1e-5);
}

TEST(GridFixedPoint, Budget) {
  const auto s = make_space({1.0});
  try {
    grid_fixed_point(LocalFunction::identity(3), standard_simplex(s, 3), GridSpec{1000, 1000});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
  }
}

TEST(GridFixedPoint, EnvelopeAgainstSolverOnBuiltins) {
  const auto s = make_space({1.0});
  for (const BuiltinProblem& p : builtin_problems()) {
    const ConditionalSimplex t = p.simplex(s);
    const std::size_t res = p.dim() == 1 ? 2000 : 120;
    const RandomPoint g = grid_fixed_point(p.function(), t, GridSpec{res});
    const double spacing = t.diameter()[0] / static_cast<double>(res);
    const FixedPointResult r = solve_simplex_fixed_point(p.function(), t);
    const double grid_residual = (p.map(g.at(0)) - g.at(0)).norm();
    EXPECT_GE(grid_residual, r.residual[0] - 2 * p.lipschitz * spacing) << p.name;
    EXPECT_LE((g.at(0) - r.point.at(0)).norm(), 10 * (1e-6 + spacing)) << p.name;
  }
}

TEST(Bisection, Examples) {
  const auto s = uniform_space(2);
  const RandomScalar lo = RandomScalar::constant(s, 0), one = RandomScalar::constant(s, 1), two = RandomScalar::constant(s, 2);
  EXPECT_NEAR(bisection_root([](std::size_t, double x) { return x - 0.5; }, lo, one, 1e-12)[0], 0.5, 1e-12);
  EXPECT_NEAR(bisection_root([](std::size_t, double x) { return std::cos(x) - x; }, lo, one, 1e-10)[1], 0.7390851332151607, 1e-10);
  EXPECT_NEAR(bisection_root([](std::size_t, double x) { return x * x * x - 1; }, lo, two, 1e-12)[0], 1.0, 1e-12);
  try {
    bisection_root([](std::size_t a, double x) { return a == 0 ? x - 0.5 : x + 1; }, lo, one, 1e-12);
    FAIL();
  } catch (const AtomError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoSignChange);
    EXPECT_EQ(e.atom(), 1u);
  }
}

TEST(SpernerEnumerate, SinglePointCells) {
  const auto s = uniform_space(3);
  const ConditionalSimplex t({RandomPoint::constant(s, vec({1, 2}))});
  const auto cells = m_fold_subdivide(t, 3);
  const auto hits = sperner_enumerate(cells, 3, [](std::size_t, const Vec&) { return 1; });
  for (const auto& h : hits) EXPECT_EQ(h.size(), cells.size());
}

TEST(SpernerEnumerate, IntervalWithMidpointLabelOne) {
  const auto s = make_space({1.0});
  const ConditionalSimplex t({RandomPoint::constant(s, vec({0})), RandomPoint::constant(s, vec({1}))});
  const auto cells = barycentric_subdivide(t);
  const auto hits = sperner_enumerate(cells, 1, [](std::size_t, const Vec& x) { return x(0) == 1.0 ? 2 : 1; });
  ASSERT_EQ(hits[0].size(), 1u);
  EXPECT_EQ(hits[0][0], 1u);
}

TEST(SpernerEnumerate, AgreesWithParityAudit) {
  std::mt19937_64 rng(40);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = uniform_space(1 + trial % 3);
    const std::size_t n = 2 + trial % 3;
    const ConditionalSimplex t = random_simplex(rng, s, n, n - 1);
    const auto cells = m_fold_subdivide(t, n == 4 ? 1 : 2);
    const LabeledVertexSet set = random_proper_labeling(rng, t, cells);
    const auto counts = parity_audit(cells, set);
    const auto hits = sperner_enumerate(cells, set);
    for (std::size_t a = 0; a < s->size(); ++a) {
      EXPECT_EQ(hits[a].size(), counts[a]);
      EXPECT_EQ(counts[a] % 2, 1u);
    }
  }
}

TEST(SpernerEnumerate, FirstHitIsTheSearchWinner) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = uniform_space(2);
    const ConditionalSimplex t = random_simplex(rng, s, 3, 2);
    const auto cells = m_fold_subdivide(t, 2);
    const LabeledVertexSet set = random_proper_labeling(rng, t, cells);
    const CompletelyLabeled r = find_completely_labeled(cells, set);
    const auto hits = sperner_enumerate(cells, set);
    for (std::size_t a = 0; a < 2; ++a)
      EXPECT_EQ(cells[hits[a].front()].parent_path, r.cells[r.partition.part_of(a)].parent_path);
  }
}
