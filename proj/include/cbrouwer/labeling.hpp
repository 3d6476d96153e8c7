#ifndef CBROUWER_LABELING_HPP
#define CBROUWER_LABELING_HPP

/**
 * Proper labelings and completely labeled cells.
 *
 * Labels are 1-based, matching the vertex order X_1, …, X_N of the base
 * simplex.  A label field is proper when label i at a point only occurs where
 * the point's i-th barycentric coordinate is strictly positive.
 */

#include <algorithm>
#include <cstring>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "local_function.hpp"
#include "simplex.hpp"

namespace cbrouwer {

/// "λᵢ > 0" is tested as λᵢ > kLabelStrictness, "λᵢ ≥ µᵢ" as λᵢ ≥ µᵢ − kLabelStrictness.
inline constexpr double kLabelStrictness = 1e-10;
/// Images within this distance of the base simplex are clamped onto it.
inline constexpr double kImageClampTolerance = 1e-8;

/// One label in {1, …, N} per atom.
class LabelField {
 public:
  LabelField() = default;
  LabelField(SpacePtr space, std::vector<int> labels, std::size_t n) : space_(std::move(space)), labels_(std::move(labels)) {
    if (labels_.size() != space_->size()) throw Error(ErrorCode::DimensionMismatch, "label field needs one label per atom");
    for (std::size_t a = 0; a < labels_.size(); ++a)
      if (labels_[a] < 1 || static_cast<std::size_t>(labels_[a]) > n)
        throw AtomError(ErrorCode::IndexOutOfRange, a, "label " + std::to_string(labels_[a]) + " outside 1.." + std::to_string(n));
  }

  static LabelField constant(SpacePtr space, int label, std::size_t n) {
    const std::size_t k = space->size();
    return LabelField(std::move(space), std::vector<int>(k, label), n);
  }

  const SpacePtr& space() const noexcept { return space_; }
  std::size_t atoms() const noexcept { return labels_.size(); }
  int operator[](std::size_t atom) const { return labels_.at(atom); }
  const std::vector<int>& values() const noexcept { return labels_; }
  bool operator==(const LabelField& other) const { return labels_ == other.labels_; }

 private:
  SpacePtr space_;
  std::vector<int> labels_;
};

/// Extremal points of a subdivision together with their labels.
struct LabeledVertexSet {
  ConditionalSimplex base;
  std::vector<RandomPoint> vertices;
  std::vector<LabelField> labels;
};

namespace detail {

inline std::string point_key(const Vec& v) {
  return std::string(reinterpret_cast<const char*>(v.data()), static_cast<std::size_t>(v.size()) * sizeof(double));
}

inline std::string point_key(const RandomPoint& p) {
  const auto& m = p.values();
  return std::string(reinterpret_cast<const char*>(m.data()), static_cast<std::size_t>(m.size()) * sizeof(double));
}

/// The minimal-index rule on one atom.  Never empty: Σλᵢ = Σµᵢ = 1.
inline int label_rule(const Vec& lambda, const Vec& mu) {
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda(i) > kLabelStrictness && lambda(i) >= mu(i) - kLabelStrictness) return static_cast<int>(i) + 1;
  Eigen::Index best = 0;
  double gap = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda(i) > kLabelStrictness && lambda(i) - mu(i) > gap) {
      gap = lambda(i) - mu(i);
      best = i;
    }
  return static_cast<int>(best) + 1;
}

/// Coordinates of an image point, clamped when within tolerance of the base.
inline void image_coords_into(const AffineFrame& frame, const Vec& image, std::size_t atom, Vec& mu) {
  if (!image.allFinite()) throw AtomError(ErrorCode::EvalError, atom, "function value is not finite");
  double residual = 0.0;
  frame.solve_into(image, mu, &residual);
  if (residual > kImageClampTolerance || mu.minCoeff() < -kImageClampTolerance)
    throw AtomError(ErrorCode::ImageEscapedSimplex, atom,
                    "f(Y) leaves the simplex (offset " + std::to_string(std::max(residual, -mu.minCoeff())) + ")");
  clean_weights_inplace(mu);
}

inline void point_coords_into(const AffineFrame& frame, const Vec& y, std::size_t atom, Vec& lambda) {
  double residual = 0.0;
  frame.solve_into(y, lambda, &residual);
  if (residual > kCoordTolerance || lambda.minCoeff() < -kCoordTolerance)
    throw AtomError(ErrorCode::NotInSimplex, atom, "point outside the base simplex");
  clean_weights_inplace(lambda);
}

inline Vec image_coords(const AffineFrame& frame, const Vec& image, std::size_t atom) {
  Vec mu(frame.vertices());
  image_coords_into(frame, image, atom, mu);
  return mu;
}

inline Vec point_coords(const AffineFrame& frame, const Vec& y, std::size_t atom) {
  Vec lambda(frame.vertices());
  point_coords_into(frame, y, atom, lambda);
  return lambda;
}

inline bool is_permutation_of_labels(const std::vector<int>& labels, std::size_t n) {
  if (labels.size() != n) return false;
  std::vector<bool> seen(n + 1, false);
  for (int l : labels) {
    if (l < 1 || static_cast<std::size_t>(l) > n || seen[static_cast<std::size_t>(l)]) return false;
    seen[static_cast<std::size_t>(l)] = true;
  }
  return true;
}

/// Maps a cell's vertex (by exact bits) to its position in the labeled set.
class VertexIndex {
 public:
  explicit VertexIndex(const LabeledVertexSet& set) : set_(&set) {
    for (std::size_t i = 0; i < set.vertices.size(); ++i) index_.emplace(point_key(set.vertices[i]), i);
  }
  int label(const RandomPoint& v, std::size_t atom) const {
    const auto it = index_.find(point_key(v));
    if (it == index_.end()) throw Error(ErrorCode::ImproperLabeling, "cell vertex carries no label");
    return set_->labels[it->second][atom];
  }

 private:
  const LabeledVertexSet* set_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace detail

inline LabelField canonical_label(const LocalFunction& f, const ConditionalSimplex& base, const RandomPoint& y) {
  RandomPoint::check_compatible(base.vertex(0), y);
  const RandomPoint image = f(y);
  std::vector<int> labels(y.atoms());
  for (std::size_t a = 0; a < y.atoms(); ++a) {
    const auto verts = base.atom_vertices(a);
    const detail::AffineFrame frame(verts);
    const Eigen::VectorXd lambda = detail::point_coords(frame, y.at(a), a);
    labels[a] = detail::label_rule(lambda, detail::image_coords(frame, image.at(a), a));
  }
  return LabelField(y.space(), std::move(labels), base.size());
}

/// Distinct vertices of the given cells in order of first appearance.
inline std::vector<RandomPoint> extremal_points(const std::vector<SubdivisionCell>& cells) {
  std::vector<RandomPoint> out;
  std::unordered_map<std::string, std::size_t> seen;
  for (const SubdivisionCell& c : cells)
    for (const RandomPoint& v : c.vertices)
      if (seen.emplace(detail::point_key(v), out.size()).second) out.push_back(v);
  return out;
}

inline LabeledVertexSet label_vertices(const LocalFunction& f, const ConditionalSimplex& base,
                                       const std::vector<SubdivisionCell>& cells) {
  LabeledVertexSet set{base, extremal_points(cells), {}};
  for (const RandomPoint& v : set.vertices) set.labels.push_back(canonical_label(f, base, v));
  return set;
}

inline bool is_proper(const LabeledVertexSet& set) {
  if (set.labels.size() != set.vertices.size()) return false;
  const std::size_t n = set.base.size();
  for (std::size_t a = 0; a < set.base.atoms(); ++a) {
    const detail::AffineFrame frame(set.base.atom_vertices(a));
    for (std::size_t i = 0; i < set.vertices.size(); ++i) {
      const int l = set.labels[i][a];
      if (l < 1 || static_cast<std::size_t>(l) > n) return false;
      double residual = 0.0;
      const Eigen::VectorXd lambda = frame.solve(set.vertices[i].at(a), &residual);
      if (residual > kCoordTolerance) return false;
      if (!(lambda(l - 1) > kLabelStrictness)) return false;
    }
  }
  return true;
}

struct CompletelyLabeled {
  Partition partition;
  std::vector<SubdivisionCell> cells;  // cells[k] wins on part k, vertices reordered by label
  ConditionalSimplex simplex;          // vertex j carries label j + 1 at every atom
};

/**
 * Per atom, the first cell (in the given order) whose labels at that atom are
 * a permutation of {1, …, N}.  Atoms sharing a winner form one part.
 */
inline CompletelyLabeled find_completely_labeled(const std::vector<SubdivisionCell>& cells, const LabeledVertexSet& set) {
  if (cells.empty()) throw Error(ErrorCode::EmptyFamily, "no cells to search");
  if (!is_proper(set)) throw Error(ErrorCode::ImproperLabeling, "labeling is not proper");
  const detail::VertexIndex index(set);
  const std::size_t n = set.base.size();
  const std::size_t k = set.base.atoms();
  std::vector<std::size_t> winner(k);
  std::vector<std::vector<int>> winner_labels(k);
  for (std::size_t a = 0; a < k; ++a) {
    bool found = false;
    for (std::size_t c = 0; c < cells.size() && !found; ++c) {
      std::vector<int> labels;
      for (const RandomPoint& v : cells[c].vertices) labels.push_back(index.label(v, a));
      if (detail::is_permutation_of_labels(labels, n)) {
        winner[a] = c;
        winner_labels[a] = std::move(labels);
        found = true;
      }
    }
    if (!found) throw AtomError(ErrorCode::NoCompletelyLabeledCell, a, "no completely labeled cell");
  }
  CompletelyLabeled out{Partition::group_by(set.base.space(), winner), {}, {}};
  std::vector<std::vector<RandomPoint>> ordered;
  for (std::size_t part = 0; part < out.partition.parts(); ++part) {
    const std::size_t first = out.partition.atoms_in(part).front();
    SubdivisionCell cell = cells[winner[first]];
    std::vector<RandomPoint> by_label(n);
    for (std::size_t j = 0; j < n; ++j) by_label[static_cast<std::size_t>(winner_labels[first][j] - 1)] = cell.vertices[j];
    cell.vertices = by_label;
    ordered.push_back(std::move(by_label));
    out.cells.push_back(std::move(cell));
  }
  out.simplex = sigma_combine(out.partition, std::span<const std::vector<RandomPoint>>(ordered));
  return out;
}

/// Per atom, the number of completely labeled cells.
inline std::vector<std::size_t> parity_audit(const std::vector<SubdivisionCell>& cells, const LabeledVertexSet& set) {
  if (!is_proper(set)) throw Error(ErrorCode::ImproperLabeling, "labeling is not proper");
  const detail::VertexIndex index(set);
  std::vector<std::size_t> counts(set.base.atoms(), 0);
  for (std::size_t a = 0; a < counts.size(); ++a)
    for (const SubdivisionCell& c : cells) {
      std::vector<int> labels;
      for (const RandomPoint& v : c.vertices) labels.push_back(index.label(v, a));
      if (detail::is_permutation_of_labels(labels, set.base.size())) ++counts[a];
    }
  return counts;
}

}  // namespace cbrouwer

#endif  // CBROUWER_LABELING_HPP
