#ifndef CBROUWER_LOCAL_FUNCTION_HPP
#define CBROUWER_LOCAL_FUNCTION_HPP

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prob_space.hpp"

namespace cbrouwer {

enum class DomainHint { Any, Simplex, Ball, Box, Interval };

/**
 * A map (L⁰)ᵈ → (L⁰)ᵈ.
 *
 * The atom-wise form evaluates a continuous map Rᵈ → Rᵈ independently at each
 * atom, so it is local by construction.  The foreign form wraps a callback on
 * whole random points; it is what `check_local` exists to vet.  Continuity is
 * the caller's obligation either way.
 */
class LocalFunction {
 public:
  using Vec = Eigen::VectorXd;
  using AtomFn = std::function<Vec(std::size_t atom, const Vec& x)>;
  using PointFn = std::function<RandomPoint(const RandomPoint& x)>;
  using DomainFn = std::function<bool(std::size_t atom, const Vec& x)>;

  LocalFunction() = default;

  static LocalFunction atomwise(std::size_t dim, AtomFn fn, DomainHint hint = DomainHint::Any) {
    LocalFunction f;
    f.dim_ = dim;
    f.atom_fn_ = std::move(fn);
    f.hint_ = hint;
    return f;
  }

  /// The same real map at every atom.
  static LocalFunction uniform(std::size_t dim, std::function<Vec(const Vec&)> fn, DomainHint hint = DomainHint::Any) {
    return atomwise(dim, [fn = std::move(fn)](std::size_t, const Vec& x) { return fn(x); }, hint);
  }

  static LocalFunction foreign(std::size_t dim, PointFn fn, DomainHint hint = DomainHint::Any) {
    LocalFunction f;
    f.dim_ = dim;
    f.point_fn_ = std::move(fn);
    f.hint_ = hint;
    return f;
  }

  static LocalFunction identity(std::size_t dim) {
    return uniform(dim, [](const Vec& x) { return x; });
  }

  std::size_t dim() const noexcept { return dim_; }
  DomainHint hint() const noexcept { return hint_; }
  bool is_atomwise() const noexcept { return static_cast<bool>(atom_fn_); }
  explicit operator bool() const noexcept { return atom_fn_ || point_fn_; }

  LocalFunction& with_domain(DomainFn domain) {
    domain_ = std::move(domain);
    return *this;
  }
  bool in_domain(std::size_t atom, const Vec& x) const { return !domain_ || domain_(atom, x); }

  RandomPoint operator()(const RandomPoint& x) const {
    check_input(x);
    if (point_fn_) {
      RandomPoint y = point_fn_(x);
      RandomPoint::check_compatible(x, y);
      return y;
    }
    Eigen::MatrixXd out(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(x.atoms()));
    for (std::size_t a = 0; a < x.atoms(); ++a) out.col(static_cast<Eigen::Index>(a)) = at(a, x.at(a), x.space());
    return RandomPoint(x.space(), std::move(out));
  }

  /// Value at one atom.  A foreign callback is evaluated on the constant point.
  Vec at(std::size_t atom, const Vec& x, const SpacePtr& space = nullptr) const {
    Vec y;
    if (atom_fn_) {
      y = atom_fn_(atom, x);
    } else if (point_fn_) {
      if (!space) throw Error(ErrorCode::SpaceMismatch, "foreign callbacks need the ambient space");
      y = point_fn_(RandomPoint::constant(space, x)).at(atom);
    } else {
      throw Error(ErrorCode::EvalError, "empty function");
    }
    if (static_cast<std::size_t>(y.size()) != dim_)
      throw AtomError(ErrorCode::DimensionMismatch, atom, "function returned a vector of the wrong dimension");
    return y;
  }

 private:
  void check_input(const RandomPoint& x) const {
    if (x.dim() != dim_)
      throw Error(ErrorCode::DimensionMismatch,
                  "function expects dimension " + std::to_string(dim_) + ", got " + std::to_string(x.dim()));
  }

  std::size_t dim_ = 0;
  AtomFn atom_fn_;
  PointFn point_fn_;
  DomainFn domain_;
  DomainHint hint_ = DomainHint::Any;
};

/**
 * Checks f(Σ 1_{Aᵢ} Xᵢ) = Σ 1_{Aᵢ} f(Xᵢ) exactly for every given partition.
 * Part i of the p-th partition takes samples[(i + p) mod n].
 */
inline bool check_local(const LocalFunction& f, std::span<const RandomPoint> samples,
                        std::span<const Partition> partitions) {
  if (samples.empty()) throw Error(ErrorCode::EmptyFamily, "no samples");
  for (const RandomPoint& x : samples) {
    RandomPoint::check_compatible(samples.front(), x);
    for (std::size_t a = 0; a < x.atoms(); ++a)
      if (!f.in_domain(a, x.at(a))) throw AtomError(ErrorCode::DomainViolation, a, "sample outside the function's domain");
  }
  for (std::size_t p = 0; p < partitions.size(); ++p) {
    const Partition& part = partitions[p];
    std::vector<RandomPoint> chosen, images;
    for (std::size_t i = 0; i < part.parts(); ++i) {
      chosen.push_back(samples[(i + p) % samples.size()]);
      images.push_back(f(chosen.back()));
    }
    const RandomPoint lhs = f(sigma_combine(part, std::span<const RandomPoint>(chosen)));
    const RandomPoint rhs = sigma_combine(part, std::span<const RandomPoint>(images));
    if (!(lhs == rhs)) return false;
  }
  return true;
}

}  // namespace cbrouwer

#endif  // CBROUWER_LOCAL_FUNCTION_HPP
