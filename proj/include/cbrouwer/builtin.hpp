#ifndef CBROUWER_BUILTIN_HPP
#define CBROUWER_BUILTIN_HPP

#include <cmath>
#include <string>
#include <vector>

#include "local_function.hpp"
#include "simplex.hpp"

namespace cbrouwer {

/// A classical self-map of a simplex with exactly one fixed point.
struct BuiltinProblem {
  std::string name;
  std::vector<Eigen::VectorXd> vertices;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> map;
  Eigen::VectorXd fixed_point;
  double lipschitz;  // a Lipschitz constant of the map in the Euclidean norm

  std::size_t dim() const { return static_cast<std::size_t>(vertices.front().size()); }

  LocalFunction function() const { return LocalFunction::uniform(dim(), map, DomainHint::Simplex); }

  ConditionalSimplex simplex(const SpacePtr& space) const {
    std::vector<RandomPoint> v;
    for (const Eigen::VectorXd& x : vertices) v.push_back(RandomPoint::constant(space, x));
    return ConditionalSimplex(std::move(v));
  }
};

inline std::vector<BuiltinProblem> builtin_problems() {
  using V = Eigen::VectorXd;
  auto v1 = [](double a) { return V::Constant(1, a); };
  auto v2 = [](double a, double b) {
    V v(2);
    v << a, b;
    return v;
  };
  const std::vector<V> unit = {v1(0.0), v1(1.0)};
  const std::vector<V> triangle = {v2(0.0, 0.0), v2(1.0, 0.0), v2(0.0, 1.0)};
  return {
      {"cos", unit, [v1](const V& x) { return v1(std::cos(x(0))); }, v1(0.739085133215160641655), 1.0},
      {"exp_neg", unit, [v1](const V& x) { return v1(std::exp(-x(0))); }, v1(0.567143290409783872999), 1.0},
      {"quadratic", unit, [v1](const V& x) { return v1((x(0) * x(0) + 1.0) / 3.0); },
       v1(0.381966011250105151795), 2.0 / 3.0},
      {"linear_2d", triangle, [v2](const V& x) { return v2(0.3 + 0.2 * x(1), 0.2 + 0.3 * x(0)); },
       v2(17.0 / 47.0, 29.0 / 94.0), 0.3},
      {"trig_2d", triangle, [v2](const V& x) { return v2(0.2 + 0.2 * std::cos(x(1)), 0.2 + 0.2 * std::sin(x(0))); },
       v2(0.392404329648542611726, 0.276482220071834282599), 0.2},
  };
}

}  // namespace cbrouwer

#endif  // CBROUWER_BUILTIN_HPP
