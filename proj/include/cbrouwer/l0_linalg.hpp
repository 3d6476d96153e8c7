#ifndef CBROUWER_L0_LINALG_HPP
#define CBROUWER_L0_LINALG_HPP

/**
 * Linear algebra on (L⁰)ᵈ over a finite atom space.
 *
 * Everything here reduces to ordinary Euclidean algebra atom by atom: the L⁰
 * scalar product is the per-atom dot product, esssup/essinf are per-atom
 * max/min, and a family is affinely independent in the L⁰ sense iff it is
 * affinely independent in Rᵈ at every atom.
 */

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "prob_space.hpp"

namespace cbrouwer {

/// Singular values below this fraction of the largest one count as zero.
inline constexpr double kRankThreshold = 1e-10;
/// Default residual/negativity tolerance for barycentric coordinates.
inline constexpr double kCoordTolerance = 1e-8;
/// Weights in [-kWeightDust, 0) are floating-point dust and read as 0.
inline constexpr double kWeightDust = 1e-10;

namespace detail {

using Vec = Eigen::VectorXd;

/// Per-atom affine independence (rank of the difference matrix is N-1).
inline bool affinely_independent(std::span<const Vec> pts) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  if (n == 0) return false;
  if (n == 1) return true;
  const Eigen::Index d = pts.front().size();
  if (n - 1 > d) return false;
  Eigen::MatrixXd diff(d, n - 1);
  for (Eigen::Index i = 0; i + 1 < n; ++i) diff.col(i) = pts[static_cast<std::size_t>(i)] - pts.back();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(diff);
  const auto& s = svd.singularValues();
  const double smax = s.maxCoeff();
  if (!(smax > 0.0)) return false;
  return s.minCoeff() > kRankThreshold * smax;
}

/**
 * Precomputed least-squares solver for the (d+1) × N system
 * [vertices; 1ᵀ] λ = [x; 1] of one atom.  Reused for every coordinate query
 * against a fixed simplex.
 */
class AffineFrame {
 public:
  AffineFrame() = default;
  explicit AffineFrame(std::span<const Vec> vertices) {
    const auto n = static_cast<Eigen::Index>(vertices.size());
    const Eigen::Index d = vertices.front().size();
    system_.resize(d + 1, n);
    scale_ = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      system_.col(j).head(d) = vertices[static_cast<std::size_t>(j)];
      system_(d, j) = 1.0;
      scale_ = std::max(scale_, vertices[static_cast<std::size_t>(j)].cwiseAbs().maxCoeff());
    }
    const Eigen::MatrixXd pinv = system_.completeOrthogonalDecomposition().pseudoInverse();
    pinv_x_ = pinv.leftCols(d);
    pinv_1_ = pinv.col(d);
  }

  Eigen::Index vertices() const { return system_.cols(); }
  Eigen::Index dim() const { return system_.rows() - 1; }
  /// Largest absolute vertex coordinate (at least 1); residuals are relative to it.
  double scale() const { return scale_; }

  /// Solves for λ and reports the residual ‖[V;1]λ − [x;1]‖ divided by scale().
  Vec solve(const Vec& x, double* residual) const {
    Vec lambda(system_.cols());
    solve_into(x, lambda, residual);
    return lambda;
  }

  /// As `solve`, writing into a preallocated λ.
  void solve_into(const Vec& x, Vec& lambda, double* residual) const {
    lambda.noalias() = pinv_x_ * x;
    lambda += pinv_1_;
    if (!residual) return;
    const Eigen::Index d = dim();
    double sq = 0.0;
    for (Eigen::Index j = 0; j <= d; ++j) {
      double r = (j < d ? -x(j) : -1.0);
      for (Eigen::Index i = 0; i < lambda.size(); ++i) r += system_(j, i) * lambda(i);
      sq += r * r;
    }
    *residual = std::sqrt(sq) / scale_;
  }

  Vec combine(const Vec& lambda) const { return system_.topRows(dim()) * lambda; }

 private:
  Eigen::MatrixXd system_;
  Eigen::MatrixXd pinv_x_;
  Vec pinv_1_;
  double scale_ = 1.0;
};

/// Clamps dust to zero and renormalizes to unit sum, in place.
inline void clean_weights_inplace(Vec& w) {
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w(i) < 0.0) w(i) = 0.0;
  const double s = w.sum();
  if (s > 0.0) w /= s;
}

/// Clamps dust to zero and renormalizes to unit sum.
inline Vec clean_weights(Vec w) {
  clean_weights_inplace(w);
  return w;
}

inline double max_pairwise_distance(std::span<const Vec> pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, (pts[i] - pts[j]).norm());
  return best;
}

inline std::vector<Vec> column_family(std::span<const RandomPoint> points, std::size_t atom) {
  std::vector<Vec> out;
  out.reserve(points.size());
  for (const RandomPoint& p : points) out.push_back(p.at(atom));
  return out;
}

inline void check_family(std::span<const RandomPoint> points) {
  if (points.empty()) throw Error(ErrorCode::EmptyFamily, "empty family of points");
  for (const RandomPoint& p : points) RandomPoint::check_compatible(points.front(), p);
}

}  // namespace detail

/// Convex weights λ: one N-vector per atom, nonnegative and summing to 1.
class ConvexWeights {
 public:
  ConvexWeights() = default;
  /// `weights` is N × K.  Entries in [-1e-10, 0) are clamped to 0.
  ConvexWeights(SpacePtr space, Eigen::MatrixXd weights) : space_(std::move(space)), weights_(std::move(weights)) {
    if (static_cast<std::size_t>(weights_.cols()) != space_->size())
      throw Error(ErrorCode::DimensionMismatch, "convex weights need one vector per atom");
    for (Eigen::Index a = 0; a < weights_.cols(); ++a) {
      for (Eigen::Index i = 0; i < weights_.rows(); ++i) {
        if (weights_(i, a) < -kWeightDust)
          throw AtomError(ErrorCode::NotInSimplex, static_cast<std::size_t>(a),
                          "negative convex weight " + std::to_string(weights_(i, a)));
        if (weights_(i, a) < 0.0) weights_(i, a) = 0.0;
      }
      if (std::abs(weights_.col(a).sum() - 1.0) > 1e-9)
        throw AtomError(ErrorCode::NotInSimplex, static_cast<std::size_t>(a), "convex weights do not sum to 1");
    }
  }

  const SpacePtr& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(weights_.rows()); }
  double operator()(std::size_t atom, std::size_t i) const {
    return weights_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(atom));
  }
  Eigen::VectorXd at(std::size_t atom) const { return weights_.col(static_cast<Eigen::Index>(atom)); }
  const Eigen::MatrixXd& values() const noexcept { return weights_; }

 private:
  SpacePtr space_;
  Eigen::MatrixXd weights_;
};

inline RandomScalar inner(const RandomPoint& x, const RandomPoint& y) {
  RandomPoint::check_compatible(x, y);
  return RandomScalar(x.space(), (x.values().cwiseProduct(y.values())).colwise().sum().transpose());
}

inline RandomScalar norm(const RandomPoint& x) {
  return RandomScalar(x.space(), x.values().colwise().norm().transpose());
}

/// 1 at atoms where the family is affinely independent, 0 elsewhere.
inline RandomScalar affinely_independent(std::span<const RandomPoint> points) {
  detail::check_family(points);
  const SpacePtr& space = points.front().space();
  Eigen::VectorXd out(static_cast<Eigen::Index>(space->size()));
  for (std::size_t a = 0; a < space->size(); ++a) {
    const auto fam = detail::column_family(points, a);
    out(static_cast<Eigen::Index>(a)) = detail::affinely_independent(fam) ? 1.0 : 0.0;
  }
  return RandomScalar(space, std::move(out));
}

/// Convenience: true iff affinely independent at every atom.
inline bool affinely_independent_everywhere(std::span<const RandomPoint> points) {
  return affinely_independent(points).essinf() > 0.5;
}

/// Σ λᵢ Xᵢ with per-atom weights.
inline RandomPoint combine(std::span<const RandomPoint> vertices, const ConvexWeights& w) {
  detail::check_family(vertices);
  if (w.size() != vertices.size()) throw Error(ErrorCode::DimensionMismatch, "weight count differs from vertex count");
  RandomPoint out = RandomPoint::zero(vertices.front().space(), vertices.front().dim());
  Eigen::MatrixXd acc = out.values();
  for (std::size_t a = 0; a < out.atoms(); ++a)
    for (std::size_t i = 0; i < vertices.size(); ++i)
      acc.col(static_cast<Eigen::Index>(a)) += w(a, i) * vertices[i].values().col(static_cast<Eigen::Index>(a));
  return RandomPoint(out.space(), std::move(acc));
}

/**
 * Barycentric coordinates of X in conv(vertices), atom by atom.  Unique by
 * affine independence.  Throws NotInSimplex (with atom and magnitude) when
 * the residual or a negative weight exceeds `tol`.
 */
inline ConvexWeights barycentric_coords(std::span<const RandomPoint> vertices, const RandomPoint& x,
                                        double tol = kCoordTolerance) {
  detail::check_family(vertices);
  RandomPoint::check_compatible(vertices.front(), x);
  const std::size_t k = x.atoms();
  Eigen::MatrixXd w(static_cast<Eigen::Index>(vertices.size()), static_cast<Eigen::Index>(k));
  for (std::size_t a = 0; a < k; ++a) {
    const auto fam = detail::column_family(vertices, a);
    if (!detail::affinely_independent(fam))
      throw AtomError(ErrorCode::DegenerateVertices, a, "vertices are affinely dependent");
    detail::AffineFrame frame(fam);
    double residual = 0.0;
    Eigen::VectorXd lambda = frame.solve(x.at(a), &residual);
    if (residual > tol)
      throw AtomError(ErrorCode::NotInSimplex, a, "point off the affine hull by " + std::to_string(residual));
    if (lambda.minCoeff() < -tol)
      throw AtomError(ErrorCode::NotInSimplex, a, "negative weight " + std::to_string(lambda.minCoeff()));
    w.col(static_cast<Eigen::Index>(a)) = detail::clean_weights(std::move(lambda));
  }
  return ConvexWeights(x.space(), std::move(w));
}

/// Per-atom max over pairs ‖Xᵢ − Xⱼ‖.
inline RandomScalar diam(std::span<const RandomPoint> points) {
  detail::check_family(points);
  const SpacePtr& space = points.front().space();
  Eigen::VectorXd out(static_cast<Eigen::Index>(space->size()));
  for (std::size_t a = 0; a < space->size(); ++a) {
    const auto fam = detail::column_family(points, a);
    out(static_cast<Eigen::Index>(a)) = detail::max_pairwise_distance(fam);
  }
  return RandomScalar(space, std::move(out));
}

}  // namespace cbrouwer

#endif  // CBROUWER_L0_LINALG_HPP
