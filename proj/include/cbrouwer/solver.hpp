#ifndef CBROUWER_SOLVER_HPP
#define CBROUWER_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "descent.hpp"

namespace cbrouwer {

/// Final completely labeled cell: vertices[j] carries labels[j] (= j + 1 when complete).
struct Certificate {
  std::vector<RandomPoint> vertices;
  std::vector<LabelField> labels;
  std::vector<std::size_t> depth;  // per atom; SIZE_MAX marks a cell that is not completely labeled
  bool complete = true;
};

struct FixedPointResult {
  RandomPoint point;
  RandomScalar residual;
  bool converged = false;
  SolveStatus status = SolveStatus::MaxRoundsExceeded;
  std::vector<SolveStatus> atom_status;
  std::size_t rounds_used = 0;
  std::vector<std::size_t> atom_rounds;
  std::vector<double> diam_trace;  // per round, max over atoms
  Certificate certificate;
  std::size_t backtracks = 0;
  std::size_t evaluations = 0;
  std::vector<std::vector<detail::RoundRecord>> history;  // per atom
};

namespace detail {

inline SolveStatus worst(SolveStatus a, SolveStatus b) {
  auto rank = [](SolveStatus s) {
    switch (s) {
      case SolveStatus::Converged: return 0;
      case SolveStatus::DiameterTolerance: return 1;
      case SolveStatus::MaxRoundsExceeded: return 2;
      case SolveStatus::SearchExhausted: return 3;
    }
    return 3;
  };
  return rank(a) >= rank(b) ? a : b;
}

inline FixedPointResult assemble(const SpacePtr& space, std::vector<AtomOutcome> atoms) {
  FixedPointResult r;
  const std::size_t k = atoms.size();
  const auto d = static_cast<Eigen::Index>(atoms.front().point.size());
  Eigen::MatrixXd pts(d, static_cast<Eigen::Index>(k));
  Eigen::VectorXd res(static_cast<Eigen::Index>(k));
  r.status = SolveStatus::Converged;
  std::size_t longest = 0;
  for (std::size_t a = 0; a < k; ++a) {
    pts.col(static_cast<Eigen::Index>(a)) = atoms[a].point;
    res(static_cast<Eigen::Index>(a)) = atoms[a].residual;
    r.atom_status.push_back(atoms[a].status);
    r.status = worst(r.status, atoms[a].status);
    r.atom_rounds.push_back(atoms[a].rounds);
    r.rounds_used = std::max(r.rounds_used, atoms[a].rounds);
    r.backtracks += atoms[a].backtracks;
    r.evaluations += atoms[a].evaluations;
    longest = std::max(longest, atoms[a].history.size());
  }
  r.converged = r.status == SolveStatus::Converged;
  r.point = RandomPoint(space, std::move(pts));
  r.residual = RandomScalar(space, std::move(res));
  for (std::size_t round = 0; round < longest; ++round) {
    double m = 0.0;
    for (const AtomOutcome& o : atoms)
      if (!o.history.empty()) m = std::max(m, o.history[std::min(round, o.history.size() - 1)].diam);
    r.diam_trace.push_back(m);
  }
  const std::size_t n = atoms.front().certificate.size();
  for (std::size_t j = 0; j < n; ++j) {
    Eigen::MatrixXd v(d, static_cast<Eigen::Index>(k));
    std::vector<int> labels(k);
    for (std::size_t a = 0; a < k; ++a) {
      v.col(static_cast<Eigen::Index>(a)) = atoms[a].certificate[j];
      labels[a] = atoms[a].certificate_labels[j];
    }
    r.certificate.vertices.emplace_back(space, std::move(v));
    r.certificate.labels.emplace_back(space, std::move(labels), n);
  }
  for (const AtomOutcome& o : atoms) {
    r.certificate.depth.push_back(o.certificate_depth);
    if (o.certificate_depth == std::numeric_limits<std::size_t>::max()) r.certificate.complete = false;
    r.history.push_back(o.history);
  }
  return r;
}

}  // namespace detail

/**
 * Fixed point of a local f mapping the conditional simplex S into itself.
 *
 * Each round moves one subdivision level deeper; the candidate is the
 * barycenter of the current cell.  Non-convergence is reported in the result,
 * never thrown.
 */
inline FixedPointResult solve_simplex_fixed_point(const LocalFunction& f, const ConditionalSimplex& s,
                                                  const SolverConfig& cfg = {}) {
  cfg.validate();
  if (f.dim() != s.dim()) throw Error(ErrorCode::DimensionMismatch, "function and simplex dimensions differ");
  const SpacePtr& space = s.space();
  std::vector<detail::AtomOutcome> outcomes;
  for (std::size_t a = 0; a < s.atoms(); ++a) {
    detail::AtomProblem p;
    p.base = s.atom_vertices(a);
    p.image = [&f, a, &space](const detail::Vec& x) { return f.at(a, x, space); };
    p.residual = [&f, a, &space](const detail::Vec& x) { return (f.at(a, x, space) - x).norm(); };
    outcomes.push_back(detail::descend(p, cfg, a));
  }
  return detail::assemble(space, std::move(outcomes));
}

// ---------------------------------------------------------------------------
// Convex bodies

struct Ball {
  RandomPoint center;
  RandomScalar radius;
};

struct Box {
  RandomPoint lower;
  RandomPoint upper;
};

struct SimplexBody {
  ConditionalSimplex simplex;
};

/// A user-supplied body given by its per-atom projection and a bounding ball.
struct CustomBody {
  std::function<Eigen::VectorXd(std::size_t atom, const Eigen::VectorXd& x)> projection;
  RandomPoint center;
  RandomScalar radius;
};

namespace detail {

/// Nearest point of conv(verts) to x by enumerating every face.
inline Vec project_onto_hull(const std::vector<Vec>& verts, const Vec& x) {
  const std::size_t n = verts.size();
  Vec best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) idx.push_back(i);
    Vec w(static_cast<Eigen::Index>(idx.size()));
    if (idx.size() == 1) {
      w(0) = 1.0;
    } else {
      Eigen::MatrixXd dirs(x.size(), static_cast<Eigen::Index>(idx.size() - 1));
      for (std::size_t i = 1; i < idx.size(); ++i) dirs.col(static_cast<Eigen::Index>(i - 1)) = verts[idx[i]] - verts[idx[0]];
      const Vec t = dirs.completeOrthogonalDecomposition().solve(x - verts[idx[0]]);
      w(0) = 1.0 - t.sum();
      w.tail(t.size()) = t;
      if (w.minCoeff() < -1e-12) continue;
      w = clean_weights(std::move(w));
    }
    Vec p = Vec::Zero(x.size());
    for (std::size_t i = 0; i < idx.size(); ++i) p += w(static_cast<Eigen::Index>(i)) * verts[idx[i]];
    const double dist = (p - x).norm();
    if (dist < best_dist) {
      best_dist = dist;
      best = std::move(p);
    }
  }
  return best;
}

}  // namespace detail

class ConvexBody {
 public:
  using Vec = Eigen::VectorXd;
  using Kind = std::variant<Ball, Box, SimplexBody, CustomBody>;

  static ConvexBody ball(RandomPoint center, RandomScalar radius) {
    require_same_space(center.space(), radius.space());
    for (std::size_t a = 0; a < radius.atoms(); ++a)
      if (!(radius[a] > 0.0) || !std::isfinite(radius[a]))
        throw AtomError(ErrorCode::InvalidBody, a, "ball radius must be positive");
    return ConvexBody(Ball{std::move(center), std::move(radius)});
  }

  static ConvexBody unit_ball(const SpacePtr& space, std::size_t dim) {
    return ball(RandomPoint::zero(space, dim), RandomScalar::constant(space, 1.0));
  }

  static ConvexBody box(RandomPoint lower, RandomPoint upper) {
    RandomPoint::check_compatible(lower, upper);
    for (std::size_t a = 0; a < lower.atoms(); ++a)
      if ((lower.at(a).array() > upper.at(a).array()).any() || !lower.at(a).allFinite() || !upper.at(a).allFinite())
        throw AtomError(ErrorCode::InvalidBody, a, "box lower bound exceeds upper bound");
    return ConvexBody(Box{std::move(lower), std::move(upper)});
  }

  static ConvexBody simplex(ConditionalSimplex s) { return ConvexBody(SimplexBody{std::move(s)}); }

  static ConvexBody custom(CustomBody body) {
    if (!body.projection) throw Error(ErrorCode::InvalidBody, "custom body without a projection");
    require_same_space(body.center.space(), body.radius.space());
    for (std::size_t a = 0; a < body.radius.atoms(); ++a)
      if (!(body.radius[a] >= 0.0) || !std::isfinite(body.radius[a]))
        throw AtomError(ErrorCode::UnboundedBody, a, "custom body needs a finite bounding radius");
    return ConvexBody(std::move(body));
  }

  const Kind& kind() const noexcept { return kind_; }

  const SpacePtr& space() const {
    return std::visit(
        [](const auto& b) -> const SpacePtr& {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, Ball>) return b.center.space();
          else if constexpr (std::is_same_v<T, Box>) return b.lower.space();
          else if constexpr (std::is_same_v<T, SimplexBody>) return b.simplex.space();
          else return b.center.space();
        },
        kind_);
  }

  std::size_t dim() const {
    return std::visit(
        [](const auto& b) -> std::size_t {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, Ball>) return b.center.dim();
          else if constexpr (std::is_same_v<T, Box>) return b.lower.dim();
          else if constexpr (std::is_same_v<T, SimplexBody>) return b.simplex.dim();
          else return b.center.dim();
        },
        kind_);
  }

  std::size_t atoms() const { return space()->size(); }

  /// Nearest point of the body at one atom; x itself when x already lies in it.
  Vec project_atom(std::size_t atom, const Vec& x) const {
    return std::visit(
        [&](const auto& b) -> Vec {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, Ball>) {
            const Vec c = b.center.at(atom);
            const double r = b.radius[atom];
            const double dist = (x - c).norm();
            if (dist <= r) return x;
            return c + (r / dist) * (x - c);
          } else if constexpr (std::is_same_v<T, Box>) {
            return x.cwiseMax(b.lower.at(atom)).cwiseMin(b.upper.at(atom));
          } else if constexpr (std::is_same_v<T, SimplexBody>) {
            const auto verts = b.simplex.atom_vertices(atom);
            const detail::AffineFrame frame(verts);
            double residual = 0.0;
            const Vec lambda = frame.solve(x, &residual);
            if (residual <= 1e-14 && lambda.minCoeff() >= 0.0) return x;
            return detail::project_onto_hull(verts, x);
          } else {
            return b.projection(atom, x);
          }
        },
        kind_);
  }

  bool contains_atom(std::size_t atom, const Vec& x, double tol = kImageClampTolerance) const {
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    return (project_atom(atom, x) - x).norm() <= tol * scale;
  }

  /// Center and radius of a ball containing the body at one atom.
  std::pair<Vec, double> bounding_ball(std::size_t atom) const {
    return std::visit(
        [&](const auto& b) -> std::pair<Vec, double> {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, Ball>) {
            return {b.center.at(atom), b.radius[atom]};
          } else if constexpr (std::is_same_v<T, Box>) {
            const Vec lo = b.lower.at(atom), hi = b.upper.at(atom);
            return {(lo + hi) / 2.0, (hi - lo).norm() / 2.0};
          } else if constexpr (std::is_same_v<T, SimplexBody>) {
            const auto verts = b.simplex.atom_vertices(atom);
            const Vec c = detail::barycenter_atom(verts);
            double r = 0.0;
            for (const Vec& v : verts) r = std::max(r, (v - c).norm());
            return {c, r};
          } else {
            return {b.center.at(atom), b.radius[atom]};
          }
        },
        kind_);
  }

 private:
  explicit ConvexBody(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// The nearest-point map h onto K, atom by atom.
inline RandomPoint project(const ConvexBody& k, const RandomPoint& x) {
  require_same_space(k.space(), x.space());
  if (x.dim() != k.dim()) throw Error(ErrorCode::DimensionMismatch, "point and body dimensions differ");
  Eigen::MatrixXd out(x.values().rows(), x.values().cols());
  for (std::size_t a = 0; a < x.atoms(); ++a) out.col(static_cast<Eigen::Index>(a)) = k.project_atom(a, x.at(a));
  return RandomPoint(x.space(), std::move(out));
}

namespace detail {

/// Vertices of a regular d-simplex with circumradius 1 centered at 0, the first on +x₁.
inline std::vector<Vec> unit_regular_simplex(std::size_t d) {
  const auto m = static_cast<Eigen::Index>(d + 1);
  std::vector<Vec> w;
  for (Eigen::Index i = 0; i < m; ++i) {
    Vec v = Vec::Constant(m, -1.0 / static_cast<double>(m));
    v(i) += 1.0;
    w.push_back(v);
  }
  // Orthonormal basis of the hyperplane Σ = 0, starting from w₀.
  std::vector<Vec> basis;
  for (Eigen::Index i = 0; i < m && static_cast<std::size_t>(basis.size()) < d; ++i) {
    Vec v = w[static_cast<std::size_t>(i)];
    for (const Vec& b : basis) v -= v.dot(b) * b;
    if (v.norm() > 1e-12) basis.push_back(v.normalized());
  }
  std::vector<Vec> out;
  for (const Vec& v : w) {
    Vec c(static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) c(static_cast<Eigen::Index>(j)) = v.dot(basis[j]);
    out.push_back(c / v.norm());
  }
  return out;
}

}  // namespace detail

/**
 * A regular simplex around K whose inscribed ball has radius (1 + margin)·R,
 * R being K's bounding radius at each atom (1 where K is a point).
 */
inline ConditionalSimplex enclosing_simplex(const ConvexBody& k, double margin = 0.0) {
  if (!(margin >= 0.0)) throw Error(ErrorCode::InvalidConfig, "margin must be >= 0");
  const std::size_t d = k.dim();
  const auto dirs = detail::unit_regular_simplex(d);
  std::vector<Eigen::MatrixXd> verts(d + 1, Eigen::MatrixXd(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k.atoms())));
  for (std::size_t a = 0; a < k.atoms(); ++a) {
    auto [c, r] = k.bounding_ball(a);
    if (!std::isfinite(r)) throw AtomError(ErrorCode::UnboundedBody, a, "body has no finite bounding radius");
    if (r <= 0.0) r = 1.0;
    const double circumradius = static_cast<double>(d) * (1.0 + margin) * r;
    for (std::size_t i = 0; i <= d; ++i) verts[i].col(static_cast<Eigen::Index>(a)) = c + circumradius * dirs[i];
  }
  std::vector<RandomPoint> pts;
  for (auto& v : verts) pts.emplace_back(k.space(), std::move(v));
  return ConditionalSimplex(std::move(pts));
}

inline constexpr double kDefaultEnclosingMargin = 0.05;

/**
 * Fixed point of a local f mapping the convex body K into itself, found as a
 * fixed point of f∘h on an enclosing simplex.  Residuals are those of f.
 */
inline FixedPointResult solve_convex_fixed_point(const LocalFunction& f, const ConvexBody& k, const SolverConfig& cfg = {},
                                                 double margin = kDefaultEnclosingMargin) {
  cfg.validate();
  if (f.dim() != k.dim()) throw Error(ErrorCode::DimensionMismatch, "function and body dimensions differ");
  const ConditionalSimplex s = enclosing_simplex(k, margin);
  const SpacePtr& space = k.space();
  std::vector<detail::AtomOutcome> outcomes;
  for (std::size_t a = 0; a < k.atoms(); ++a) {
    detail::AtomProblem p;
    p.base = s.atom_vertices(a);
    p.image = [&f, &k, a, &space](const detail::Vec& y) {
      const detail::Vec fy = f.at(a, k.project_atom(a, y), space);
      if (!fy.allFinite()) throw AtomError(ErrorCode::EvalError, a, "function value is not finite");
      if (!k.contains_atom(a, fy)) throw AtomError(ErrorCode::ImageEscapedBody, a, "f(Y) leaves the convex body");
      return fy;
    };
    p.residual = [&f, &k, a, &space](const detail::Vec& y) {
      const detail::Vec hy = k.project_atom(a, y);
      return (f.at(a, hy, space) - hy).norm();
    };
    p.output = [&k, a](const detail::Vec& y) { return k.project_atom(a, y); };
    outcomes.push_back(detail::descend(p, cfg, a));
  }
  return detail::assemble(space, std::move(outcomes));
}

/**
 * Solves f(Ȳ) = Y on the order interval [lo, hi] for a local f with d = 1.
 *
 * With A = {f(lo) ≤ f(hi)} and s = 1 on A, −1 off A, Ȳ is a fixed point of
 * g(V) = clamp(V − s·(f(V) − Y), lo, hi).  The returned point is 1 × K.
 */
inline FixedPointResult ivt_solve(const LocalFunction& f, const RandomScalar& lo, const RandomScalar& hi,
                                  const RandomScalar& target, const SolverConfig& cfg = {}) {
  cfg.validate();
  if (f.dim() != 1) throw Error(ErrorCode::DimensionMismatch, "the intermediate value solver needs d = 1");
  require_same_space(lo.space(), hi.space());
  require_same_space(lo.space(), target.space());
  const SpacePtr& space = lo.space();
  auto eval = [&f, &space](std::size_t a, double v) { return f.at(a, Eigen::VectorXd::Constant(1, v), space)(0); };
  std::vector<detail::AtomOutcome> outcomes;
  for (std::size_t a = 0; a < lo.atoms(); ++a) {
    const double l = lo[a], h = hi[a], y = target[a];
    if (!(l <= h)) throw AtomError(ErrorCode::InvalidBody, a, "lower bound exceeds upper bound");
    const double fl = eval(a, l), fh = eval(a, h);
    const double slack = 1e-12 * std::max({1.0, std::abs(fl), std::abs(fh)});
    if (y < std::min(fl, fh) - slack || y > std::max(fl, fh) + slack)
      throw AtomError(ErrorCode::TargetOutOfRange, a,
                      "target " + std::to_string(y) + " outside [" + std::to_string(std::min(fl, fh)) + ", " +
                          std::to_string(std::max(fl, fh)) + "]");
    detail::AtomOutcome boundary;
    boundary.status = SolveStatus::Converged;
    boundary.certificate = {detail::Vec::Constant(1, l), detail::Vec::Constant(1, h)};
    boundary.certificate_labels = {1, 2};
    if (std::abs(fl - y) <= cfg.tol_residual || std::abs(fh - y) <= cfg.tol_residual) {
      const bool at_low = std::abs(fl - y) <= std::abs(fh - y);
      boundary.point = detail::Vec::Constant(1, at_low ? l : h);
      boundary.residual = std::abs((at_low ? fl : fh) - y);
      outcomes.push_back(std::move(boundary));
      continue;
    }
    const double sign = fl <= fh ? 1.0 : -1.0;
    detail::AtomProblem p;
    p.base = {detail::Vec::Constant(1, l), detail::Vec::Constant(1, h)};
    p.image = [eval, a, l, h, y, sign](const detail::Vec& v) {
      const double fv = eval(a, v(0));
      if (!std::isfinite(fv)) throw AtomError(ErrorCode::EvalError, a, "function value is not finite");
      return detail::Vec::Constant(1, std::clamp(v(0) - sign * (fv - y), l, h));
    };
    p.residual = [eval, a, y](const detail::Vec& v) { return std::abs(eval(a, v(0)) - y); };
    outcomes.push_back(detail::descend(p, cfg, a));
  }
  return detail::assemble(space, std::move(outcomes));
}

}  // namespace cbrouwer

#endif  // CBROUWER_SOLVER_HPP
