#ifndef CBROUWER_SIMPLEX_HPP
#define CBROUWER_SIMPLEX_HPP

/**
 * Conditional simplexes and their barycentric subdivision.
 *
 * The cell C_π of S = conv(X_1, …, X_N) has vertices
 * Y_k^π = (1/k) Σ_{i≤k} X_{π(i)}, k = 1…N.  Cells are enumerated in
 * lexicographic permutation order; every "first found" rule downstream
 * inherits that order.
 *
 * Subdivision points are computed by `detail::canonical_mean`, which sums the
 * selected vertices in lexicographic coordinate order.  A point shared by two
 * cells is therefore bit-identical regardless of which cell produced it, so
 * anything keyed on a point (labels in particular) is a function of the point.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "l0_linalg.hpp"

namespace cbrouwer {

using Permutation = std::vector<std::size_t>;  // 0-based images π(0), …, π(N-1)

inline constexpr std::size_t kDefaultCellBudget = 1'000'000;

namespace detail {

inline bool lex_less(const Vec& a, const Vec& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

/// Mean of the given points, summed in lexicographic coordinate order.
inline Vec canonical_mean(std::vector<const Vec*> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec* a, const Vec* b) { return lex_less(*a, *b); });
  Vec sum = *pts.front();
  for (std::size_t i = 1; i < pts.size(); ++i) sum += *pts[i];
  return sum / static_cast<double>(pts.size());
}

/// Vertices Y_1^π, …, Y_N^π of the cell C_π of the simplex `verts`.
inline std::vector<Vec> subdivide_atom(const std::vector<Vec>& verts, const Permutation& perm) {
  std::vector<Vec> out;
  out.reserve(verts.size());
  std::vector<const Vec*> chosen;
  chosen.reserve(verts.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    chosen.push_back(&verts[perm[k]]);
    out.push_back(canonical_mean(chosen));
  }
  return out;
}

inline std::vector<Permutation> all_permutations(std::size_t n) {
  std::vector<Permutation> out;
  Permutation p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::size_t factorial(std::size_t n) {
  std::size_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

/// (N!)^m, saturating at SIZE_MAX.
inline std::size_t cell_count(std::size_t n, std::size_t m) {
  const std::size_t f = factorial(n);
  std::size_t c = 1;
  for (std::size_t i = 0; i < m; ++i) {
    if (f != 0 && c > std::numeric_limits<std::size_t>::max() / f) return std::numeric_limits<std::size_t>::max();
    c *= f;
  }
  return c;
}

inline Vec barycenter_atom(const std::vector<Vec>& verts) {
  std::vector<const Vec*> all;
  for (const Vec& v : verts) all.push_back(&v);
  return canonical_mean(all);
}

}  // namespace detail

/// conv(X_1, …, X_N) with affinely independent vertices at every atom.
class ConditionalSimplex {
 public:
  ConditionalSimplex() = default;

  /// Validates the vertex family; throws AffinelyDependent naming the first bad atom.
  explicit ConditionalSimplex(std::vector<RandomPoint> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw Error(ErrorCode::EmptyFamily, "a simplex needs at least one vertex");
    for (const RandomPoint& v : vertices_) RandomPoint::check_compatible(vertices_.front(), v);
    for (std::size_t a = 0; a < atoms(); ++a) {
      if (!detail::affinely_independent(atom_vertices(a)))
        throw AtomError(ErrorCode::AffinelyDependent, a, "simplex vertices are affinely dependent");
    }
  }

  std::size_t size() const noexcept { return vertices_.size(); }
  std::size_t dim() const { return vertices_.front().dim(); }
  std::size_t atoms() const { return vertices_.front().atoms(); }
  const SpacePtr& space() const { return vertices_.front().space(); }
  const RandomPoint& vertex(std::size_t i) const { return vertices_.at(i); }
  const std::vector<RandomPoint>& vertices() const noexcept { return vertices_; }

  std::vector<detail::Vec> atom_vertices(std::size_t atom) const { return detail::column_family(vertices_, atom); }

  RandomPoint barycenter() const {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(atoms()));
    for (std::size_t a = 0; a < atoms(); ++a)
      out.col(static_cast<Eigen::Index>(a)) = detail::barycenter_atom(atom_vertices(a));
    return RandomPoint(space(), std::move(out));
  }

  ConvexWeights coords(const RandomPoint& x, double tol = kCoordTolerance) const {
    return barycentric_coords(vertices_, x, tol);
  }

  bool contains(const RandomPoint& x, double tol = kCoordTolerance) const {
    try {
      coords(x, tol);
      return true;
    } catch (const Error&) {
      return false;
    }
  }

  RandomScalar diameter() const { return diam(vertices_); }

 private:
  std::vector<RandomPoint> vertices_;
};

inline ConditionalSimplex make_simplex(std::vector<RandomPoint> vertices) {
  return ConditionalSimplex(std::move(vertices));
}

/// One cell C_π of an m-fold barycentric subdivision.
struct SubdivisionCell {
  Permutation perm;                       // the last step of parent_path
  std::vector<RandomPoint> vertices;      // Y_1^π, …, Y_N^π
  std::size_t depth = 0;                  // m
  std::vector<Permutation> parent_path;   // permutations from the root, length m

  ConditionalSimplex as_simplex() const { return ConditionalSimplex(vertices); }
};

namespace detail {

inline std::vector<RandomPoint> subdivide_points(const std::vector<RandomPoint>& verts, const Permutation& perm) {
  const SpacePtr& space = verts.front().space();
  const auto d = static_cast<Eigen::Index>(verts.front().dim());
  const auto k = static_cast<Eigen::Index>(verts.front().atoms());
  std::vector<Eigen::MatrixXd> cols(verts.size(), Eigen::MatrixXd(d, k));
  for (Eigen::Index a = 0; a < k; ++a) {
    const auto child = subdivide_atom(column_family(verts, static_cast<std::size_t>(a)), perm);
    for (std::size_t j = 0; j < child.size(); ++j) cols[j].col(a) = child[j];
  }
  std::vector<RandomPoint> out;
  for (auto& c : cols) out.emplace_back(space, std::move(c));
  return out;
}

inline SubdivisionCell make_child(const std::vector<RandomPoint>& verts, const Permutation& perm, std::size_t depth,
                                  std::vector<Permutation> path) {
  path.push_back(perm);
  return SubdivisionCell{perm, subdivide_points(verts, perm), depth, std::move(path)};
}

}  // namespace detail

/// The N! cells of one barycentric subdivision, lexicographic in π.
inline std::vector<SubdivisionCell> barycentric_subdivide(const ConditionalSimplex& s) {
  std::vector<SubdivisionCell> out;
  for (const Permutation& p : detail::all_permutations(s.size())) out.push_back(detail::make_child(s.vertices(), p, 1, {}));
  return out;
}

/// Subdivides a cell once more; children carry depth + 1 and the extended path.
inline std::vector<SubdivisionCell> subdivide(const SubdivisionCell& cell) {
  std::vector<SubdivisionCell> out;
  for (const Permutation& p : detail::all_permutations(cell.vertices.size()))
    out.push_back(detail::make_child(cell.vertices, p, cell.depth + 1, cell.parent_path));
  return out;
}

/**
 * Lazy depth-first enumeration of the m-fold subdivision.  Only one chain of
 * ancestors is held in memory; cells come out in lexicographic path order.
 */
class MFoldSubdivision {
 public:
  MFoldSubdivision(const ConditionalSimplex& s, std::size_t m, std::size_t cell_budget = kDefaultCellBudget)
      : root_(s.vertices()), m_(m), perms_(detail::all_permutations(s.size())) {
    if (m < 1) throw Error(ErrorCode::IndexOutOfRange, "subdivision depth must be >= 1");
    count_ = detail::cell_count(s.size(), m);
    if (count_ > cell_budget)
      throw Error(ErrorCode::BudgetExceeded, "(N!)^m = " + std::to_string(count_) + " cells exceeds the budget of " +
                                                 std::to_string(cell_budget));
    index_.assign(m, 0);
  }

  std::size_t total() const noexcept { return count_; }

  std::optional<SubdivisionCell> next() {
    if (done_) return std::nullopt;
    // Rebuild the chain from the first level whose index changed.
    while (chain_.size() > valid_) chain_.pop_back();
    while (chain_.size() < m_) {
      const std::size_t level = chain_.size();
      const std::vector<RandomPoint>& parent = level == 0 ? root_ : chain_.back().vertices;
      std::vector<Permutation> path = level == 0 ? std::vector<Permutation>{} : chain_.back().parent_path;
      chain_.push_back(detail::make_child(parent, perms_[index_[level]], level + 1, std::move(path)));
    }
    SubdivisionCell out = chain_.back();
    // Advance the odometer.
    std::size_t level = m_;
    while (level > 0) {
      --level;
      if (++index_[level] < perms_.size()) break;
      index_[level] = 0;
      if (level == 0) done_ = true;
    }
    valid_ = level;
    return out;
  }

 private:
  std::vector<RandomPoint> root_;
  std::size_t m_;
  std::vector<Permutation> perms_;
  std::vector<std::size_t> index_;
  std::vector<SubdivisionCell> chain_;
  std::size_t valid_ = 0;
  std::size_t count_ = 0;
  bool done_ = false;
};

inline std::vector<SubdivisionCell> m_fold_subdivide(const ConditionalSimplex& s, std::size_t m,
                                                     std::size_t cell_budget = kDefaultCellBudget) {
  MFoldSubdivision gen(s, m, cell_budget);
  std::vector<SubdivisionCell> out;
  out.reserve(gen.total());
  while (auto c = gen.next()) out.push_back(std::move(*c));
  return out;
}

inline bool are_siblings(const SubdivisionCell& a, const SubdivisionCell& b) {
  if (a.depth != b.depth || a.parent_path.size() != b.parent_path.size() || a.perm.size() != b.perm.size())
    return false;
  if (a.parent_path.empty()) return true;
  return std::equal(a.parent_path.begin(), a.parent_path.end() - 1, b.parent_path.begin());
}

/// Indices j (1-based) where π and π̄ have the same image set {π(1..j)}.
inline std::vector<std::size_t> common_prefix_sets(const Permutation& p, const Permutation& q) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < p.size() && j < q.size(); ++j) {
    Permutation a(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(j + 1));
    Permutation b(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(j + 1));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a == b) out.push_back(j + 1);
  }
  return out;
}

/// C_π ∩ C_π̄ = conv(Y_j^π : j ∈ J) for sibling cells.
inline std::optional<ConditionalSimplex> cell_intersection(const SubdivisionCell& a, const SubdivisionCell& b) {
  if (!are_siblings(a, b)) throw Error(ErrorCode::NotSiblings, "cells do not share a parent");
  const auto j = common_prefix_sets(a.perm, b.perm);
  if (j.empty()) return std::nullopt;
  std::vector<RandomPoint> verts;
  for (std::size_t idx : j) verts.push_back(a.vertices[idx - 1]);
  return ConditionalSimplex(std::move(verts));
}

/// B_s = conv(X_1, …, X_s).
inline ConditionalSimplex face(const ConditionalSimplex& s, std::size_t count) {
  if (count < 1 || count > s.size())
    throw Error(ErrorCode::IndexOutOfRange, "face size " + std::to_string(count) + " outside 1.." + std::to_string(s.size()));
  return ConditionalSimplex(std::vector<RandomPoint>(s.vertices().begin(), s.vertices().begin() +
                                                                            static_cast<std::ptrdiff_t>(count)));
}

/**
 * The cells meeting B_s in dimension s (those with π({1..s}) = {1..s}),
 * restricted to B_s: first s vertices, permutation truncated to s entries.
 * Together they form the barycentric subdivision of B_s.
 */
inline std::vector<SubdivisionCell> restrict_to_face(const std::vector<SubdivisionCell>& cells, std::size_t count) {
  std::vector<SubdivisionCell> out;
  for (const SubdivisionCell& c : cells) {
    if (count < 1 || count > c.perm.size()) throw Error(ErrorCode::IndexOutOfRange, "face size out of range");
    const bool fixes = std::all_of(c.perm.begin(), c.perm.begin() + static_cast<std::ptrdiff_t>(count),
                                   [count](std::size_t v) { return v < count; });
    if (!fixes) continue;
    SubdivisionCell r;
    r.perm.assign(c.perm.begin(), c.perm.begin() + static_cast<std::ptrdiff_t>(count));
    r.vertices.assign(c.vertices.begin(), c.vertices.begin() + static_cast<std::ptrdiff_t>(count));
    r.depth = c.depth;
    r.parent_path = c.parent_path;
    if (!r.parent_path.empty()) r.parent_path.back() = r.perm;
    out.push_back(std::move(r));
  }
  return out;
}

struct LocatedCells {
  Partition partition;
  std::vector<SubdivisionCell> cells;  // cells[k] contains X on part k
};

namespace detail {

/// Descending stable order of weights snapped to a 1e-12 grid, ties to the smaller index.
inline Permutation ordering_permutation(const Vec& lambda) {
  Permutation p(static_cast<std::size_t>(lambda.size()));
  std::iota(p.begin(), p.end(), std::size_t{0});
  auto w = [&](std::size_t i) { return std::round(lambda(static_cast<Eigen::Index>(i)) * 1e12); };
  std::stable_sort(p.begin(), p.end(), [&](std::size_t i, std::size_t j) { return w(i) > w(j); });
  return p;
}

}  // namespace detail

/// Per atom, the cell C_π containing X, with π sorting X's weights descending.
inline LocatedCells locate_cell(const ConditionalSimplex& s, const RandomPoint& x) {
  const ConvexWeights w = s.coords(x);
  std::vector<Permutation> perms;
  for (std::size_t a = 0; a < s.atoms(); ++a) perms.push_back(detail::ordering_permutation(w.at(a)));
  Partition partition = Partition::group_by(s.space(), perms);
  std::vector<SubdivisionCell> cells;
  for (std::size_t part = 0; part < partition.parts(); ++part) {
    const Permutation& p = perms[partition.atoms_in(part).front()];
    cells.push_back(detail::make_child(s.vertices(), p, 1, {}));
  }
  return {std::move(partition), std::move(cells)};
}

/// σ-combination of same-dimension simplexes along a partition.
inline ConditionalSimplex sigma_combine(const Partition& partition, std::span<const std::vector<RandomPoint>> vertex_lists) {
  if (vertex_lists.size() < partition.parts()) throw Error(ErrorCode::MissingPart, "not enough simplexes for partition");
  const std::size_t n = vertex_lists.front().size();
  std::vector<RandomPoint> verts;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<RandomPoint> column;
    for (const auto& list : vertex_lists) {
      if (list.size() != n) throw Error(ErrorCode::DimensionMismatch, "simplexes differ in dimension N");
      column.push_back(list[j]);
    }
    verts.push_back(sigma_combine(partition, std::span<const RandomPoint>(column)));
  }
  return ConditionalSimplex(std::move(verts));
}

}  // namespace cbrouwer

#endif  // CBROUWER_SIMPLEX_HPP
