#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace cbt;

namespace {

double max_cell_diam(const std::vector<SubdivisionCell>& cells, std::size_t atom) {
  double m = 0.0;
  for (const auto& c : cells) m = std::max(m, diam(c.vertices)[atom]);
  return m;
}

}  // namespace

TEST(MakeSimplex, StandardTriangle) {
  const auto s = uniform_space(1);
  const ConditionalSimplex t = standard_simplex(s, 2);
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.dim(), 2u);
}

TEST(MakeSimplex, IndicatorIntervalIsUnitInterval) {
  const auto s = uniform_space(2);
  const ConditionalSimplex t = make_simplex({point(s, {vec({1}), vec({0})}), point(s, {vec({0}), vec({1})})});
  EXPECT_EQ(t.size(), 2u);
  for (double x : {0.0, 0.3, 1.0}) EXPECT_TRUE(t.contains(RandomPoint::constant(s, vec({x}))));
  EXPECT_FALSE(t.contains(RandomPoint::constant(s, vec({1.2}))));
}

TEST(MakeSimplex, CollinearVerticesAreRejected) {
  const auto s = uniform_space(2);
  try {
    make_simplex({RandomPoint::zero(s, 2), RandomPoint::basis(s, 2, 0), RandomPoint::constant(s, vec({2, 0}))});
    FAIL();
  } catch (const AtomError& e) {
    EXPECT_EQ(e.code(), ErrorCode::AffinelyDependent);
    EXPECT_EQ(e.atom(), 0u);
  }
  EXPECT_THROW(make_simplex({RandomPoint::zero(s, 2), RandomPoint::zero(s, 3)}), Error);
}

TEST(BarycentricSubdivide, IntervalHalves) {
  const auto s = uniform_space(1);
  const ConditionalSimplex t = make_simplex({RandomPoint::constant(s, vec({0})), RandomPoint::constant(s, vec({1}))});
  const auto cells = barycentric_subdivide(t);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_EQ(cells[0].vertices[0].at(0)(0), 0.0);
  EXPECT_EQ(cells[0].vertices[1].at(0)(0), 0.5);
  EXPECT_EQ(cells[1].vertices[0].at(0)(0), 1.0);
  EXPECT_EQ(cells[1].vertices[1].at(0)(0), 0.5);
}

TEST(BarycentricSubdivide, TriangleCellsShareBarycenterAndShrink) {
  const auto s = uniform_space(1);
  const ConditionalSimplex t = standard_simplex(s, 2);
  const auto cells = barycentric_subdivide(t);
  ASSERT_EQ(cells.size(), 6u);
  const Vec b = t.barycenter().at(0);
  for (const auto& c : cells) {
    EXPECT_LT((c.vertices[2].at(0) - b).norm(), 1e-15);
    EXPECT_LE(diam(c.vertices)[0], 2.0 / 3.0 * t.diameter()[0] * (1 + 1e-12));
    EXPECT_NO_THROW(c.as_simplex());
  }
  // Lexicographic permutation order.
  for (std::size_t i = 1; i < cells.size(); ++i) EXPECT_LT(cells[i - 1].perm, cells[i].perm);
}

TEST(BarycentricSubdivide, VerticesFollowPrefixMeans) {
  std::mt19937_64 rng(12);
  const auto s = uniform_space(2);
  const ConditionalSimplex t = random_simplex(rng, s, 4, 3);
  for (const auto& c : barycentric_subdivide(t)) {
    for (std::size_t k = 0; k < 4; ++k) {
      RandomPoint sum = RandomPoint::zero(s, 3);
      for (std::size_t i = 0; i <= k; ++i) sum = sum + t.vertex(c.perm[i]);
      const RandomPoint expect = (1.0 / static_cast<double>(k + 1)) * sum;
      EXPECT_LT((expect.values() - c.vertices[k].values()).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(MFoldSubdivide, IntervalThreeTimes) {
  const auto s = uniform_space(1);
  const ConditionalSimplex t = make_simplex({RandomPoint::constant(s, vec({0})), RandomPoint::constant(s, vec({1}))});
  const auto cells = m_fold_subdivide(t, 3);
  ASSERT_EQ(cells.size(), 8u);
  for (const auto& c : cells) EXPECT_EQ(diam(c.vertices)[0], 0.125);
}

TEST(MFoldSubdivide, OneFoldEqualsBarycentric) {
  std::mt19937_64 rng(13);
  const auto s = uniform_space(2);
  const ConditionalSimplex t = random_simplex(rng, s, 3, 2);
  const auto a = m_fold_subdivide(t, 1), b = barycentric_subdivide(t);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].perm, b[i].perm);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(a[i].vertices[k], b[i].vertices[k]);
  }
}

TEST(MFoldSubdivide, TriangleTwice) {
  const auto s = uniform_space(1);
  const ConditionalSimplex t = standard_simplex(s, 2);
  const auto cells = m_fold_subdivide(t, 2);
  EXPECT_EQ(cells.size(), 36u);
  EXPECT_LE(max_cell_diam(cells, 0), 4.0 / 9.0 * t.diameter()[0] * (1 + 1e-12));
  for (const auto& c : cells) EXPECT_EQ(c.depth, 2u);
}

TEST(MFoldSubdivide, BudgetAndDepthErrors) {
  const auto s = uniform_space(1);
  const ConditionalSimplex t = standard_simplex(s, 3);
  try {
    m_fold_subdivide(t, 5, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
  }
  EXPECT_THROW(m_fold_subdivide(t, 0), Error);
}

TEST(MFoldSubdivide, DiameterDecayExhaustive) {
  std::mt19937_64 rng(14);
  for (std::size_t n = 2; n <= 4; ++n)
    for (std::size_t m = 1; m <= 4; ++m) {
      if (detail::cell_count(n, m) > 400'000) continue;
      const auto s = uniform_space(2);
      const ConditionalSimplex t = random_simplex(rng, s, n, n - 1 + (m % 2));
      const double bound = std::pow(static_cast<double>(n - 1) / static_cast<double>(n), static_cast<double>(m));
      MFoldSubdivision gen(t, m);
      double worst = 0.0;
      while (auto c = gen.next()) {
        const RandomScalar d = diam(c->vertices);
        for (std::size_t a = 0; a < 2; ++a) worst = std::max(worst, d[a] / (bound * t.diameter()[a]));
      }
      EXPECT_LE(worst, 1 + 1e-9) << "N=" << n << " m=" << m;
    }
}

TEST(MFoldSubdivide, SharedPointsAreBitIdentical) {
  std::mt19937_64 rng(15);
  const auto s = uniform_space(1);
  const ConditionalSimplex t = random_simplex(rng, s, 3, 2);
  const auto cells = m_fold_subdivide(t, 3);
  const auto pts = extremal_points(cells);
  // Euler: V − E + F = 1 with F = 216 and 3F = 2E − boundary edges (3·2^3 = 24): E = 336, V = 121.
  EXPECT_EQ(pts.size(), 121u);
}

TEST(CellIntersection, Examples) {
  const auto s = uniform_space(1);
  const ConditionalSimplex t = standard_simplex(s, 2);
  const auto cells = barycentric_subdivide(t);  // perms in lex order: 012, 021, 102, 120, 201, 210
  const auto self = cell_intersection(cells[0], cells[0]);
  ASSERT_TRUE(self.has_value());
  EXPECT_EQ(self->size(), 3u);
  const auto edge = cell_intersection(cells[0], cells[2]);  // (1,2,3) vs (2,1,3) share J = {2, 3}
  ASSERT_TRUE(edge.has_value());
  ASSERT_EQ(edge->size(), 2u);
  EXPECT_LT((edge->vertex(0).at(0) - vec({0.5, 0})).norm(), 1e-15);
  EXPECT_LT((edge->vertex(1).at(0) - t.barycenter().at(0)).norm(), 1e-15);
  const auto point = cell_intersection(cells[0], cells[5]);  // (1,2,3) vs (3,2,1) share J = {3}
  ASSERT_TRUE(point.has_value());
  ASSERT_EQ(point->size(), 1u);
  EXPECT_LT((point->vertex(0).at(0) - t.barycenter().at(0)).norm(), 1e-15);

  const ConditionalSimplex iv = make_simplex({RandomPoint::constant(s, vec({0})), RandomPoint::constant(s, vec({1}))});
  const auto halves = barycentric_subdivide(iv);
  const auto mid = cell_intersection(halves[0], halves[1]);
  ASSERT_TRUE(mid.has_value());
  ASSERT_EQ(mid->size(), 1u);
  EXPECT_EQ(mid->vertex(0).at(0)(0), 0.5);
}

TEST(CellIntersection, NonSiblingsAreRejected) {
  const auto s = uniform_space(1);
  const auto cells = m_fold_subdivide(standard_simplex(s, 2), 2);
  try {
    cell_intersection(cells[0], cells[6]);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSiblings);
  }
}

TEST(CellIntersection, FullDimensionOnlyForEqualPermutations) {
  const auto s = uniform_space(1);
  const auto cells = barycentric_subdivide(standard_simplex(s, 3));
  for (const auto& a : cells)
    for (const auto& b : cells) {
      const auto x = cell_intersection(a, b);
      const std::size_t dimension = x ? x->size() : 0;
      EXPECT_EQ(dimension == 4, a.perm == b.perm);
    }
}

TEST(Face, Examples) {
  const auto s = uniform_space(1);
  const ConditionalSimplex t = standard_simplex(s, 2);
  EXPECT_EQ(face(t, 3).size(), 3u);
  EXPECT_EQ(face(t, 1).size(), 1u);
  EXPECT_EQ(face(t, 1).vertex(0), t.vertex(0));
  EXPECT_THROW(face(t, 0), Error);
  EXPECT_THROW(face(t, 4), Error);
  const auto restricted = restrict_to_face(barycentric_subdivide(t), 2);
  const auto expect = barycentric_subdivide(face(t, 2));
  ASSERT_EQ(restricted.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k)
      EXPECT_LT((restricted[i].vertices[k].at(0) - expect[i].vertices[k].at(0)).norm(), 1e-15);
}

TEST(LocateCell, BarycenterGivesIdentity) {
  const auto s = uniform_space(2);
  const ConditionalSimplex t = standard_simplex(s, 2);
  const LocatedCells loc = locate_cell(t, t.barycenter());
  EXPECT_EQ(loc.partition.parts(), 1u);
  EXPECT_EQ(loc.cells[0].perm, (Permutation{0, 1, 2}));
}

TEST(LocateCell, FirstVertex) {
  const auto s = uniform_space(1);
  const ConditionalSimplex t = standard_simplex(s, 2);
  EXPECT_EQ(locate_cell(t, t.vertex(0)).cells[0].perm[0], 0u);
}

TEST(LocateCell, TwoAtomsDifferentOrders) {
  const auto s = uniform_space(2);
  const ConditionalSimplex t = standard_simplex(s, 2);
  Eigen::MatrixXd w(3, 2);
  w << 0.5, 0.2, 0.3, 0.3, 0.2, 0.5;
  const LocatedCells loc = locate_cell(t, combine(t.vertices(), ConvexWeights(s, w)));
  ASSERT_EQ(loc.partition.parts(), 2u);
  EXPECT_EQ(loc.cells[loc.partition.part_of(0)].perm, (Permutation{0, 1, 2}));
  EXPECT_EQ(loc.cells[loc.partition.part_of(1)].perm, (Permutation{2, 1, 0}));
}

TEST(LocateCell, OutsidePoint) {
  const auto s = uniform_space(1);
  EXPECT_THROW(locate_cell(standard_simplex(s, 2), RandomPoint::constant(s, vec({1, 1}))), Error);
}

TEST(LocateCell, ReturnedCellContainsPoint) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = uniform_space(1 + trial % 4);
    const std::size_t n = 2 + trial % 3;
    const ConditionalSimplex t = random_simplex(rng, s, n, n - 1);
    const RandomPoint x = random_inside(rng, t);
    const LocatedCells loc = locate_cell(t, x);
    for (std::size_t a = 0; a < s->size(); ++a) {
      std::vector<Vec> cell;
      for (const RandomPoint& v : loc.cells[loc.partition.part_of(a)].vertices) cell.push_back(v.at(a));
      EXPECT_GE(detail::AffineFrame(cell).solve(x.at(a), nullptr).minCoeff(), -1e-10);
    }
  }
}

TEST(SigmaStability, CombinedCellsFormSimplexInsideBase) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = uniform_space(4);
    const std::size_t n = 2 + trial % 3;
    const ConditionalSimplex t = random_simplex(rng, s, n, n - 1 + trial % 2);
    const auto cells = m_fold_subdivide(t, 2);
    const Partition p = random_partition(rng, s, 4);
    std::vector<std::vector<RandomPoint>> lists;
    for (std::size_t i = 0; i < p.parts(); ++i)
      lists.push_back(cells[std::uniform_int_distribution<std::size_t>(0, cells.size() - 1)(rng)].vertices);
    const ConditionalSimplex combined = sigma_combine(p, std::span<const std::vector<RandomPoint>>(lists));
    EXPECT_NO_THROW(make_simplex(combined.vertices()));
    for (const auto& v : combined.vertices()) EXPECT_TRUE(t.contains(v));
  }
}

TEST(ExtremalPoints, VerticesHaveZeroOneCoordinates) {
  std::mt19937_64 rng(18);
  const auto s = uniform_space(3);
  const ConditionalSimplex t = random_simplex(rng, s, 4, 3);
  for (std::size_t j = 0; j < 4; ++j) {
    const ConvexWeights w = t.coords(t.vertex(j));
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t i = 0; i < 4; ++i) EXPECT_TRUE(std::abs(w(a, i)) < 1e-12 || std::abs(w(a, i) - 1) < 1e-12);
  }
}

TEST(ExtremalPoints, StrictCombinationsNeverHitVertex) {
  std::mt19937_64 rng(20);
  const auto s = uniform_space(2);
  const ConditionalSimplex t = random_simplex(rng, s, 3, 2);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int trial = 0; trial < 500; ++trial) {
    const RandomPoint y = random_inside(rng, t), z = random_inside(rng, t);
    Eigen::VectorXd l(2);
    l << u(rng), u(rng);
    const RandomScalar lam(s, l), one_minus(s, Eigen::VectorXd::Ones(2) - l);
    const RandomPoint c = lam * y + one_minus * z;
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t a = 0; a < 2; ++a) {
        if ((y.at(a) - z.at(a)).norm() < 1e-9) continue;
        EXPECT_GT((c.at(a) - t.vertex(j).at(a)).norm(), 1e-9);
      }
  }
}
