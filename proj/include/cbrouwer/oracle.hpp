#ifndef CBROUWER_ORACLE_HPP
#define CBROUWER_ORACLE_HPP

/**
 * Brute-force references: grid search for fixed points, scalar bisection and
 * exhaustive Sperner enumeration.  They share no search logic with the solver.
 */

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "labeling.hpp"

namespace cbrouwer {

struct GridSpec {
  std::size_t resolution = 100;
  std::size_t budget = 10'000'000;
};

namespace detail {

/// C(n + k − 1, k − 1): number of compositions of n into k nonnegative parts, saturating.
inline std::size_t composition_count(std::size_t n, std::size_t k) {
  long double c = 1.0L;
  for (std::size_t i = 1; i < k; ++i) c = c * static_cast<long double>(n + i) / static_cast<long double>(i);
  return c > static_cast<long double>(std::numeric_limits<std::size_t>::max())
             ? std::numeric_limits<std::size_t>::max()
             : static_cast<std::size_t>(std::llround(c));
}

/// Visits k-part compositions of n in lexicographic order of (c_1, …, c_k).
template <typename Visit>
void for_each_composition(std::size_t n, std::size_t k, Visit&& visit) {
  std::vector<std::size_t> c(k, 0);
  c[k - 1] = n;
  if (k == 1) {
    visit(c);
    return;
  }
  // Lex order: first component ascending.
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t left) {
    if (pos == k - 1) {
      c[pos] = left;
      visit(c);
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      c[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, n);
}

}  // namespace detail

/// Per atom, the first barycentric grid node minimizing ‖f(X) − X‖.
inline RandomPoint grid_fixed_point(const LocalFunction& f, const ConditionalSimplex& s, const GridSpec& g) {
  if (g.resolution < 1) throw Error(ErrorCode::InvalidConfig, "grid resolution must be >= 1");
  const std::size_t n = s.size();
  const std::size_t count = detail::composition_count(g.resolution, n);
  if (count > g.budget)
    throw Error(ErrorCode::BudgetExceeded, std::to_string(count) + " grid nodes exceed the budget of " + std::to_string(g.budget));
  Eigen::MatrixXd out(static_cast<Eigen::Index>(s.dim()), static_cast<Eigen::Index>(s.atoms()));
  const double res = static_cast<double>(g.resolution);
  for (std::size_t a = 0; a < s.atoms(); ++a) {
    const auto verts = s.atom_vertices(a);
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd arg = verts.front();
    Eigen::VectorXd x(static_cast<Eigen::Index>(s.dim()));
    detail::for_each_composition(g.resolution, n, [&](const std::vector<std::size_t>& c) {
      x.setZero();
      for (std::size_t i = 0; i < n; ++i) x += (static_cast<double>(c[i]) / res) * verts[i];
      const double r = (f.at(a, x, s.space()) - x).norm();
      if (r < best) {
        best = r;
        arg = x;
      }
    });
    out.col(static_cast<Eigen::Index>(a)) = arg;
  }
  return RandomPoint(s.space(), std::move(out));
}

/// Per-atom bisection of g(atom, ·) on [lo, hi] down to width ≤ tol.
inline RandomScalar bisection_root(const std::function<double(std::size_t atom, double x)>& g, const RandomScalar& lo,
                                   const RandomScalar& hi, double tol) {
  require_same_space(lo.space(), hi.space());
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidConfig, "bisection tolerance must be > 0");
  Eigen::VectorXd out(static_cast<Eigen::Index>(lo.atoms()));
  for (std::size_t a = 0; a < lo.atoms(); ++a) {
    double l = lo[a], h = hi[a];
    double gl = g(a, l), gh = g(a, h);
    if (gl == 0.0) {
      out(static_cast<Eigen::Index>(a)) = l;
      continue;
    }
    if (gh == 0.0) {
      out(static_cast<Eigen::Index>(a)) = h;
      continue;
    }
    if ((gl > 0.0) == (gh > 0.0)) throw AtomError(ErrorCode::NoSignChange, a, "g has the same sign at both ends");
    while (h - l > tol) {
      const double m = l + (h - l) / 2.0;
      if (m <= l || m >= h) break;
      const double gm = g(a, m);
      if (gm == 0.0) {
        l = h = m;
        break;
      }
      if ((gm > 0.0) == (gl > 0.0)) {
        l = m;
        gl = gm;
      } else {
        h = m;
      }
    }
    out(static_cast<Eigen::Index>(a)) = l + (h - l) / 2.0;
  }
  return RandomScalar(lo.space(), std::move(out));
}

/**
 * Per atom, the indices of all cells whose vertex labels are a permutation of
 * {1, …, N}.  `label(atom, x)` is queried for every cell vertex.
 */
inline std::vector<std::vector<std::size_t>> sperner_enumerate(
    const std::vector<SubdivisionCell>& cells, std::size_t atoms,
    const std::function<int(std::size_t atom, const Eigen::VectorXd& x)>& label) {
  std::vector<std::vector<std::size_t>> out(atoms);
  for (std::size_t a = 0; a < atoms; ++a)
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::size_t n = cells[c].vertices.size();
      std::vector<int> hits(n + 1, 0);
      bool ok = true;
      for (const RandomPoint& v : cells[c].vertices) {
        const int l = label(a, v.at(a));
        if (l < 1 || static_cast<std::size_t>(l) > n || hits[static_cast<std::size_t>(l)]++ > 0) ok = false;
      }
      if (ok) out[a].push_back(c);
    }
  return out;
}

/// The same enumeration against a labeled vertex set, matching vertices by distance.
inline std::vector<std::vector<std::size_t>> sperner_enumerate(const std::vector<SubdivisionCell>& cells,
                                                               const LabeledVertexSet& set) {
  auto lookup = [&set](std::size_t atom, const Eigen::VectorXd& x) {
    for (std::size_t i = 0; i < set.vertices.size(); ++i)
      if ((set.vertices[i].at(atom) - x).norm() <= 1e-12 * std::max(1.0, x.norm())) return set.labels[i][atom];
    return 0;
  };
  return sperner_enumerate(cells, set.base.atoms(), lookup);
}

}  // namespace cbrouwer

#endif  // CBROUWER_ORACLE_HPP
