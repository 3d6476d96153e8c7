#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace cbt;

namespace {

/// conv(X₁..X₄) in R³ on two atoms: the unit corner on ω₁, its image under x ↦ 2x + e₁ on ω₂.
ConditionalSimplex four_vertex_simplex(const SpacePtr& s) {
  const Vec o = vec({0, 0, 0}), e1 = vec({1, 0, 0}), e2 = vec({0, 1, 0}), e3 = vec({0, 0, 1});
  auto lift = [&](const Vec& x) { return point(s, {x, 2 * x + e1}); };
  return ConditionalSimplex({lift(o), lift(e1), lift(e2), lift(e3)});
}

ConditionalSimplex unit_interval(const SpacePtr& s) {
  return ConditionalSimplex({RandomPoint::constant(s, vec({0})), RandomPoint::constant(s, vec({1}))});
}

/// Labels for the points 0, 1/2, 1 of the halved unit interval.
LabeledVertexSet interval_labels(const SpacePtr& s, const std::vector<SubdivisionCell>& cells, int at0, int mid, int at1) {
  LabeledVertexSet set{unit_interval(s), extremal_points(cells), {}};
  for (const auto& v : set.vertices) {
    const double x = v.at(0)(0);
    const int l = x == 0.0 ? at0 : x == 1.0 ? at1 : mid;
    set.labels.push_back(LabelField::constant(s, l, 2));
  }
  return set;
}

}  // namespace

TEST(CanonicalLabel, IdentityPicksFirstPositiveCoordinate) {
  const auto s = uniform_space(1);
  const ConditionalSimplex t = standard_simplex(s, 2);
  const auto id = LocalFunction::identity(2);
  EXPECT_EQ(canonical_label(id, t, t.barycenter())[0], 1);
  EXPECT_EQ(canonical_label(id, t, RandomPoint::constant(s, vec({0.5, 0.5})))[0], 2);
  EXPECT_EQ(canonical_label(id, t, t.vertex(2))[0], 3);
}

TEST(CanonicalLabel, FourVertexTwoAtomExample) {
  const auto s = uniform_space(2);
  const ConditionalSimplex t = four_vertex_simplex(s);
  const auto& x = t.vertices();
  const RandomPoint y = (1.0 / 3.0) * (x[0] + x[1] + x[2]);
  const RandomPoint image(s, [&] {
    Eigen::MatrixXd m(3, 2);
    m.col(0) = 0.25 * x[0].at(0) + 0.75 * x[2].at(0);
    m.col(1) = 0.4 * x[0].at(1) + 0.4 * x[1].at(1) + 0.2 * x[3].at(1);
    return m;
  }());
  const auto f = LocalFunction::atomwise(3, [&](std::size_t a, const Vec&) { return image.at(a); });
  const LabelField l = canonical_label(f, t, y);
  EXPECT_EQ(l[0], 1);
  EXPECT_EQ(l[1], 3);
}

TEST(CanonicalLabel, ConstantLastVertex) {
  const auto s = uniform_space(1);
  const ConditionalSimplex t = standard_simplex(s, 2);
  const auto f = LocalFunction::uniform(2, [](const Vec&) { return vec({0, 1}); });
  EXPECT_EQ(canonical_label(f, t, RandomPoint::constant(s, vec({0.2, 0.3})))[0], 1);
}

TEST(CanonicalLabel, Errors) {
  const auto s = uniform_space(2);
  const ConditionalSimplex t = standard_simplex(s, 2);
  const auto escape = LocalFunction::uniform(2, [](const Vec&) { return vec({2, 2}); });
  try {
    canonical_label(escape, t, t.barycenter());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ImageEscapedSimplex);
  }
  try {
    canonical_label(LocalFunction::identity(2), t, RandomPoint::constant(s, vec({-1, 0})));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotInSimplex);
  }
}

TEST(CanonicalLabel, ImageDustIsClamped) {
  const auto s = uniform_space(1);
  const ConditionalSimplex t = standard_simplex(s, 2);
  const auto f = LocalFunction::uniform(2, [](const Vec&) { return vec({-1e-10, 0.5}); });
  EXPECT_NO_THROW(canonical_label(f, t, t.barycenter()));
}

TEST(CanonicalLabel, LocalUnderGluing) {
  std::mt19937_64 rng(21);
  const auto s = uniform_space(4);
  const ConditionalSimplex t = standard_simplex(s, 2);
  const auto f = LocalFunction::atomwise(2, [](std::size_t a, const Vec& x) {
    const double c = 0.1 * static_cast<double>(a);
    return vec({0.3 + 0.2 * std::sin(x(1) + c), 0.2 + 0.2 * std::cos(x(0))});
  });
  for (int trial = 0; trial < 100; ++trial) {
    const Partition p = random_partition(rng, s, 3);
    std::vector<RandomPoint> ys;
    for (std::size_t i = 0; i < p.parts(); ++i) ys.push_back(random_inside(rng, t));
    const LabelField glued = canonical_label(f, t, sigma_combine(p, std::span<const RandomPoint>(ys)));
    for (std::size_t a = 0; a < 4; ++a) EXPECT_EQ(glued[a], canonical_label(f, t, ys[p.part_of(a)])[a]);
  }
}

TEST(CanonicalLabel, FaceInvariantMapUsesFaceLabels) {
  const auto s = uniform_space(1);
  const ConditionalSimplex t = standard_simplex(s, 2);
  const auto f = LocalFunction::uniform(2, [](const Vec& x) { return vec({0.3 + 0.4 * x(0), 0.5 * x(1)}); });
  const auto cells = m_fold_subdivide(t, 3);
  const LabeledVertexSet set = label_vertices(f, t, cells);
  for (std::size_t i = 0; i < set.vertices.size(); ++i)
    if (set.vertices[i].at(0)(1) == 0.0) EXPECT_LE(set.labels[i][0], 2);
}

TEST(IsProper, Examples) {
  std::mt19937_64 rng(22);
  const auto s = uniform_space(2);
  const ConditionalSimplex t = standard_simplex(s, 2);
  const auto cells = m_fold_subdivide(t, 2);
  const auto f = LocalFunction::uniform(2, [](const Vec& x) { return vec({0.5 * x(1), 0.25 + 0.5 * x(0)}); });
  EXPECT_TRUE(is_proper(label_vertices(f, t, cells)));

  LabeledVertexSet bad = label_vertices(f, t, cells);
  for (std::size_t i = 0; i < bad.vertices.size(); ++i)
    if (bad.vertices[i] == t.vertex(0)) bad.labels[i] = LabelField(s, {1, 2}, 3);
  EXPECT_FALSE(is_proper(bad));

  for (int trial = 0; trial < 20; ++trial) EXPECT_TRUE(is_proper(random_proper_labeling(rng, t, cells)));
}

TEST(FindCompletelyLabeled, SinglePoint) {
  const auto s = uniform_space(2);
  const ConditionalSimplex t({RandomPoint::constant(s, vec({0.3}))});
  const auto cells = barycentric_subdivide(t);
  const auto f = LocalFunction::uniform(1, [](const Vec&) { return vec({0.3}); });
  const CompletelyLabeled r = find_completely_labeled(cells, label_vertices(f, t, cells));
  EXPECT_EQ(r.partition.parts(), 1u);
  EXPECT_EQ(r.simplex.vertex(0), t.vertex(0));
  EXPECT_EQ(parity_audit(cells, label_vertices(f, t, cells)), (std::vector<std::size_t>{1, 1}));
}

TEST(FindCompletelyLabeled, IntervalExample) {
  const auto s = uniform_space(1);
  const auto cells = barycentric_subdivide(unit_interval(s));
  const LabeledVertexSet set = interval_labels(s, cells, 1, 1, 2);
  const CompletelyLabeled r = find_completely_labeled(cells, set);
  EXPECT_EQ(r.simplex.vertex(0).at(0)(0), 0.5);
  EXPECT_EQ(r.simplex.vertex(1).at(0)(0), 1.0);
  EXPECT_EQ(parity_audit(cells, set), (std::vector<std::size_t>{1}));
}

TEST(FindCompletelyLabeled, IdenticalAtomsShareOnePart) {
  const auto s1 = uniform_space(1), s2 = uniform_space(2);
  const auto f = LocalFunction::uniform(2, [](const Vec& x) { return vec({0.2 + 0.3 * x(1), 0.1 + 0.5 * x(0) * x(0)}); });
  const ConditionalSimplex t1 = standard_simplex(s1, 2), t2 = standard_simplex(s2, 2);
  const auto c1 = m_fold_subdivide(t1, 2), c2 = m_fold_subdivide(t2, 2);
  const CompletelyLabeled r1 = find_completely_labeled(c1, label_vertices(f, t1, c1));
  const CompletelyLabeled r2 = find_completely_labeled(c2, label_vertices(f, t2, c2));
  EXPECT_EQ(r2.partition.parts(), 1u);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t a = 0; a < 2; ++a) EXPECT_EQ(r2.simplex.vertex(j).at(a), r1.simplex.vertex(j).at(0));
}

TEST(FindCompletelyLabeled, AssembledVerticesCarryTheirIndex) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = uniform_space(1 + trial % 4);
    const std::size_t n = 2 + trial % 3;
    const ConditionalSimplex t = random_simplex(rng, s, n, n - 1);
    const auto cells = m_fold_subdivide(t, n == 4 ? 1 : 2);
    const LabeledVertexSet set = random_proper_labeling(rng, t, cells);
    const CompletelyLabeled r = find_completely_labeled(cells, set);
    const detail::VertexIndex index(set);
    for (std::size_t a = 0; a < s->size(); ++a) {
      const auto& cell = r.cells[r.partition.part_of(a)];
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_EQ(index.label(cell.vertices[j], a), static_cast<int>(j) + 1);
        EXPECT_EQ(r.simplex.vertex(j).at(a), cell.vertices[j].at(a));
      }
    }
    for (const auto& v : r.simplex.vertices()) EXPECT_TRUE(t.contains(v));
  }
}

TEST(FindCompletelyLabeled, ImproperLabelingIsRejected) {
  const auto s = uniform_space(1);
  const auto cells = barycentric_subdivide(unit_interval(s));
  try {
    find_completely_labeled(cells, interval_labels(s, cells, 2, 1, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ImproperLabeling);
  }
  EXPECT_THROW(parity_audit(cells, interval_labels(s, cells, 2, 1, 2)), Error);
}

TEST(ParityAudit, RandomTriangleLabelingsAreOdd) {
  std::mt19937_64 rng(24);
  const auto s = uniform_space(1);
  const ConditionalSimplex t = standard_simplex(s, 2);
  const auto cells = barycentric_subdivide(t);
  for (int trial = 0; trial < 100; ++trial) {
    const auto counts = parity_audit(cells, random_proper_labeling(rng, t, cells));
    EXPECT_EQ(counts[0] % 2, 1u);
  }
}

TEST(ParityAudit, OddOnDeeperSubdivisionsAndManyAtoms) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 60; ++trial) {
    const auto s = uniform_space(1 + trial % 4);
    const std::size_t n = 2 + trial % 3;
    const ConditionalSimplex t = random_simplex(rng, s, n, n - 1);
    const auto cells = m_fold_subdivide(t, n == 4 ? 2 : 3);
    for (std::size_t c : parity_audit(cells, random_proper_labeling(rng, t, cells))) EXPECT_EQ(c % 2, 1u);
  }
}
