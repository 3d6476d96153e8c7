#pragma once

#include <random>
#include <vector>

#include "cbrouwer.hpp"

namespace cbt {

using namespace cbrouwer;
using Vec = Eigen::VectorXd;

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

/// Point with column a equal to cols[a].
inline RandomPoint point(const SpacePtr& s, std::initializer_list<Vec> cols) {
  std::vector<Vec> c(cols);
  Eigen::MatrixXd m(c.front().size(), static_cast<Eigen::Index>(c.size()));
  for (std::size_t a = 0; a < c.size(); ++a) m.col(static_cast<Eigen::Index>(a)) = c[a];
  return RandomPoint(s, m);
}

inline SpacePtr uniform_space(std::size_t k) { return make_space(std::vector<double>(k, 1.0 / static_cast<double>(k))); }

inline ConditionalSimplex standard_simplex(const SpacePtr& s, std::size_t d) {
  std::vector<RandomPoint> v{RandomPoint::zero(s, d)};
  for (std::size_t i = 0; i < d; ++i) v.push_back(RandomPoint::basis(s, d, i));
  return ConditionalSimplex(v);
}

inline RandomPoint random_point(std::mt19937_64& rng, const SpacePtr& s, std::size_t d, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(s->size()));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return RandomPoint(s, m);
}

/// N vertices in dimension d with a well-conditioned per-atom frame.
inline ConditionalSimplex random_simplex(std::mt19937_64& rng, const SpacePtr& s, std::size_t n, std::size_t d) {
  for (;;) {
    std::vector<RandomPoint> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(random_point(rng, s, d, 2.0));
    bool ok = true;
    for (std::size_t a = 0; a < s->size() && ok; ++a) {
      std::vector<Vec> pts;
      for (const auto& p : v) pts.push_back(p.at(a));
      if (n > 1) {
        Eigen::MatrixXd diff(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n - 1));
        for (std::size_t i = 0; i + 1 < n; ++i) diff.col(static_cast<Eigen::Index>(i)) = pts[i] - pts.back();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(diff);
        const auto& sv = svd.singularValues();
        ok = sv.minCoeff() > 0.1 * sv.maxCoeff();
      }
    }
    if (ok) return ConditionalSimplex(v);
  }
}

inline std::vector<double> random_weights(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(n);
  double t = 0;
  for (double& x : w) t += (x = e(rng));
  for (double& x : w) x /= t;
  return w;
}

/// A random point of S with per-atom weights drawn from the flat Dirichlet law.
inline RandomPoint random_inside(std::mt19937_64& rng, const ConditionalSimplex& s) {
  Eigen::MatrixXd w(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(s.atoms()));
  for (std::size_t a = 0; a < s.atoms(); ++a) {
    const auto r = random_weights(rng, s.size());
    for (std::size_t i = 0; i < s.size(); ++i) w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) = r[i];
  }
  return combine(s.vertices(), ConvexWeights(s.space(), w));
}

inline Partition random_partition(std::mt19937_64& rng, const SpacePtr& s, std::size_t max_parts) {
  std::uniform_int_distribution<std::size_t> u(0, max_parts - 1);
  std::vector<std::size_t> keys(s->size());
  for (auto& k : keys) k = u(rng);
  return Partition::group_by(s, keys);
}

/// Labels drawn uniformly from each vertex's barycentric support, per atom.
inline LabeledVertexSet random_proper_labeling(std::mt19937_64& rng, const ConditionalSimplex& base,
                                               const std::vector<SubdivisionCell>& cells) {
  LabeledVertexSet set{base, extremal_points(cells), {}};
  for (const RandomPoint& v : set.vertices) {
    const ConvexWeights w = base.coords(v);
    std::vector<int> labels(base.atoms());
    for (std::size_t a = 0; a < base.atoms(); ++a) {
      std::vector<int> support;
      for (std::size_t i = 0; i < base.size(); ++i)
        if (w(a, i) > kLabelStrictness) support.push_back(static_cast<int>(i) + 1);
      labels[a] = support[std::uniform_int_distribution<std::size_t>(0, support.size() - 1)(rng)];
    }
    set.labels.emplace_back(base.space(), labels, base.size());
  }
  return set;
}

}  // namespace cbt
