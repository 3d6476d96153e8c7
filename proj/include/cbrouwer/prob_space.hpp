#ifndef CBROUWER_PROB_SPACE_HPP
#define CBROUWER_PROB_SPACE_HPP

/**
 * Finite probability spaces and the random objects living on them.
 *
 * Every atom carries strictly positive mass, so there are no null sets:
 * "P-almost surely" means "at every atom" throughout this library, and two
 * random objects are equal iff they agree at every atom.  Atom order is the
 * input order and every per-atom container uses it.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"

namespace cbrouwer {

class ProbSpace;
using SpacePtr = std::shared_ptr<const ProbSpace>;

class ProbSpace {
 public:
  /// Input mass may deviate from 1 by at most this much before renormalizing.
  static constexpr double kMassTolerance = 1e-9;

  static SpacePtr make(std::vector<double> probs) {
    if (probs.empty()) throw Error(ErrorCode::EmptySpace, "a probability space needs at least one atom");
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (!(probs[i] > 0.0) || !std::isfinite(probs[i]))
        throw AtomError(ErrorCode::NonPositiveProbability, i,
                        "probability " + std::to_string(probs[i]) + " is not strictly positive");
    }
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::abs(total - 1.0) > kMassTolerance)
      throw Error(ErrorCode::MassNotOne, "probabilities sum to " + std::to_string(total));
    for (double& p : probs) p /= total;
    return SpacePtr(new ProbSpace(std::move(probs)));
  }

  std::size_t size() const noexcept { return probs_.size(); }
  double prob(std::size_t atom) const { return probs_.at(atom); }
  std::span<const double> probs() const noexcept { return probs_; }

  bool operator==(const ProbSpace& other) const { return probs_ == other.probs_; }

 private:
  explicit ProbSpace(std::vector<double> probs) : probs_(std::move(probs)) {}
  std::vector<double> probs_;
};

inline SpacePtr make_space(std::vector<double> probs) { return ProbSpace::make(std::move(probs)); }

inline bool same_space(const SpacePtr& a, const SpacePtr& b) {
  return a == b || (a && b && *a == *b);
}

inline void require_same_space(const SpacePtr& a, const SpacePtr& b) {
  if (!same_space(a, b)) throw Error(ErrorCode::SpaceMismatch, "operands live on different probability spaces");
}

/// An element of L⁰: one real per atom.
class RandomScalar {
 public:
  RandomScalar() = default;
  RandomScalar(SpacePtr space, Eigen::VectorXd values) : space_(std::move(space)), values_(std::move(values)) {
    if (!space_) throw Error(ErrorCode::EmptySpace, "random scalar without a space");
    if (static_cast<std::size_t>(values_.size()) != space_->size())
      throw Error(ErrorCode::DimensionMismatch, "random scalar needs one value per atom");
  }

  static RandomScalar constant(SpacePtr space, double value) {
    const auto k = static_cast<Eigen::Index>(space->size());
    return RandomScalar(std::move(space), Eigen::VectorXd::Constant(k, value));
  }

  const SpacePtr& space() const noexcept { return space_; }
  std::size_t atoms() const noexcept { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::size_t atom) const { return values_(static_cast<Eigen::Index>(atom)); }
  double& operator[](std::size_t atom) { return values_(static_cast<Eigen::Index>(atom)); }
  const Eigen::VectorXd& values() const noexcept { return values_; }

  double esssup() const { return values_.maxCoeff(); }
  double essinf() const { return values_.minCoeff(); }

  bool operator==(const RandomScalar& other) const {
    return same_space(space_, other.space_) && values_ == other.values_;
  }

 private:
  SpacePtr space_;
  Eigen::VectorXd values_;
};

/// An element of (L⁰)ᵈ, stored as a d × K matrix (column = atom).
class RandomPoint {
 public:
  RandomPoint() = default;
  RandomPoint(SpacePtr space, Eigen::MatrixXd values) : space_(std::move(space)), values_(std::move(values)) {
    if (!space_) throw Error(ErrorCode::EmptySpace, "random point without a space");
    if (static_cast<std::size_t>(values_.cols()) != space_->size())
      throw Error(ErrorCode::DimensionMismatch, "random point needs one vector per atom");
    if (values_.rows() < 1) throw Error(ErrorCode::DimensionMismatch, "random point dimension must be >= 1");
  }

  static RandomPoint zero(SpacePtr space, std::size_t dim) {
    const auto k = static_cast<Eigen::Index>(space->size());
    return RandomPoint(std::move(space), Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), k));
  }

  /// The same vector at every atom.
  static RandomPoint constant(SpacePtr space, const Eigen::VectorXd& value) {
    const auto k = static_cast<Eigen::Index>(space->size());
    return RandomPoint(std::move(space), value.replicate(1, k));
  }

  /// The basis element e_i (0-based i) of (L⁰)ᵈ.
  static RandomPoint basis(SpacePtr space, std::size_t dim, std::size_t i) {
    if (i >= dim) throw Error(ErrorCode::IndexOutOfRange, "basis index beyond dimension");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(i)) = 1.0;
    return constant(std::move(space), v);
  }

  /// Random point from a scalar field (d = 1).
  static RandomPoint from_scalar(const RandomScalar& s) {
    return RandomPoint(s.space(), s.values().transpose());
  }

  const SpacePtr& space() const noexcept { return space_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t atoms() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }

  Eigen::VectorXd at(std::size_t atom) const { return values_.col(static_cast<Eigen::Index>(atom)); }
  void set(std::size_t atom, const Eigen::VectorXd& v) {
    if (v.size() != values_.rows()) throw Error(ErrorCode::DimensionMismatch, "vector dimension differs");
    values_.col(static_cast<Eigen::Index>(atom)) = v;
  }

  /// Component `i` as a random scalar (used for d = 1 problems).
  RandomScalar component(std::size_t i) const {
    return RandomScalar(space_, values_.row(static_cast<Eigen::Index>(i)).transpose());
  }

  bool operator==(const RandomPoint& other) const {
    return same_space(space_, other.space_) && values_.rows() == other.values_.rows() &&
           values_ == other.values_;
  }

  friend RandomPoint operator+(const RandomPoint& a, const RandomPoint& b) {
    check_compatible(a, b);
    return RandomPoint(a.space_, a.values_ + b.values_);
  }
  friend RandomPoint operator-(const RandomPoint& a, const RandomPoint& b) {
    check_compatible(a, b);
    return RandomPoint(a.space_, a.values_ - b.values_);
  }
  friend RandomPoint operator*(double s, const RandomPoint& a) { return RandomPoint(a.space_, s * a.values_); }
  friend RandomPoint operator*(const RandomScalar& s, const RandomPoint& a) {
    require_same_space(s.space(), a.space_);
    return RandomPoint(a.space_, a.values_ * s.values().asDiagonal());
  }

  static void check_compatible(const RandomPoint& a, const RandomPoint& b) {
    require_same_space(a.space_, b.space_);
    if (a.dim() != b.dim())
      throw Error(ErrorCode::DimensionMismatch,
                  "dimensions " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()) + " differ");
  }

 private:
  SpacePtr space_;
  Eigen::MatrixXd values_;
};

/// A finite partition (A_1, …, A_K) of the atoms; part indices are 0-based.
class Partition {
 public:
  Partition() = default;
  Partition(SpacePtr space, std::vector<std::size_t> part_of) : space_(std::move(space)), part_of_(std::move(part_of)) {
    if (!space_) throw Error(ErrorCode::EmptySpace, "partition without a space");
    if (part_of_.size() != space_->size())
      throw Error(ErrorCode::DimensionMismatch, "partition must assign every atom exactly one part");
    parts_ = part_of_.empty() ? 0 : *std::max_element(part_of_.begin(), part_of_.end()) + 1;
  }

  /// The trivial partition {Ω}.
  static Partition whole(SpacePtr space) {
    std::vector<std::size_t> parts(space->size(), 0);
    return Partition(std::move(space), std::move(parts));
  }

  /// Groups atoms by equal key, numbering parts in order of first appearance.
  template <typename Key>
  static Partition group_by(SpacePtr space, const std::vector<Key>& keys) {
    std::vector<Key> seen;
    std::vector<std::size_t> parts;
    parts.reserve(keys.size());
    for (const Key& k : keys) {
      auto it = std::find(seen.begin(), seen.end(), k);
      if (it == seen.end()) {
        parts.push_back(seen.size());
        seen.push_back(k);
      } else {
        parts.push_back(static_cast<std::size_t>(it - seen.begin()));
      }
    }
    return Partition(std::move(space), std::move(parts));
  }

  const SpacePtr& space() const noexcept { return space_; }
  std::size_t parts() const noexcept { return parts_; }
  std::size_t part_of(std::size_t atom) const { return part_of_.at(atom); }
  const std::vector<std::size_t>& assignment() const noexcept { return part_of_; }

  std::vector<std::size_t> atoms_in(std::size_t part) const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < part_of_.size(); ++a)
      if (part_of_[a] == part) out.push_back(a);
    return out;
  }

 private:
  SpacePtr space_;
  std::vector<std::size_t> part_of_;
  std::size_t parts_ = 0;
};

/// Σᵢ 1_{Aᵢ} Xᵢ: takes points[part_of(ω)] at every atom ω.
inline RandomPoint sigma_combine(const Partition& partition, std::span<const RandomPoint> points) {
  if (points.size() < partition.parts())
    throw Error(ErrorCode::MissingPart, "partition has " + std::to_string(partition.parts()) + " parts but only " +
                                            std::to_string(points.size()) + " points were given");
  if (points.empty()) throw Error(ErrorCode::MissingPart, "no points to combine");
  for (const RandomPoint& p : points) {
    require_same_space(partition.space(), p.space());
    if (p.dim() != points.front().dim()) throw Error(ErrorCode::DimensionMismatch, "points differ in dimension");
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(points.front().dim()),
                      static_cast<Eigen::Index>(partition.space()->size()));
  for (std::size_t a = 0; a < partition.space()->size(); ++a)
    out.col(static_cast<Eigen::Index>(a)) = points[partition.part_of(a)].values().col(static_cast<Eigen::Index>(a));
  return RandomPoint(partition.space(), std::move(out));
}

inline RandomScalar sigma_combine(const Partition& partition, std::span<const RandomScalar> scalars) {
  if (scalars.size() < partition.parts()) throw Error(ErrorCode::MissingPart, "not enough scalars for partition");
  Eigen::VectorXd out(static_cast<Eigen::Index>(partition.space()->size()));
  for (std::size_t a = 0; a < partition.space()->size(); ++a) {
    require_same_space(partition.space(), scalars[partition.part_of(a)].space());
    out(static_cast<Eigen::Index>(a)) = scalars[partition.part_of(a)][a];
  }
  return RandomScalar(partition.space(), std::move(out));
}

}  // namespace cbrouwer

#endif  // CBROUWER_PROB_SPACE_HPP
