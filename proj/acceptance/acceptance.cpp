// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "test_support.hpp"

using namespace cbt;

namespace {

std::string fixture(const std::string& name) { return std::string(CBROUWER_FIXTURES) + "/" + name; }

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s  criterion %2d  %-44s %9.1f ms  %s\n", o.pass ? "PASS" : "FAIL", id, title, ms, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Outcome diameter_decay() {
  std::mt19937_64 rng(1);
  double worst = 0;
  for (std::size_t n = 2; n <= 4; ++n)
    for (std::size_t m = 1; m <= 3; ++m) {
      const auto s = uniform_space(2);
      const ConditionalSimplex t = random_simplex(rng, s, n, n - 1);
      const double bound = std::pow(static_cast<double>(n - 1) / static_cast<double>(n), static_cast<double>(m));
      MFoldSubdivision gen(t, m);
      while (auto c = gen.next()) {
        const RandomScalar d = diam(c->vertices);
        for (std::size_t a = 0; a < 2; ++a) worst = std::max(worst, d[a] / (bound * t.diameter()[a]));
      }
    }
  return {worst <= 1 + 1e-9, fmt("max diam/bound = %.12f", worst)};
}

Outcome sperner_parity() {
  std::mt19937_64 rng(2);
  std::size_t odd = 0, agree = 0, total = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto s = uniform_space(1 + trial % 4);
    const std::size_t n = 2 + (trial / 4) % 3;
    const ConditionalSimplex t = random_simplex(rng, s, n, n - 1);
    const auto cells = m_fold_subdivide(t, n == 4 ? 1 : 2);
    const LabeledVertexSet set = random_proper_labeling(rng, t, cells);
    const auto counts = parity_audit(cells, set);
    const auto hits = sperner_enumerate(cells, set);
    for (std::size_t a = 0; a < s->size(); ++a) {
      ++total;
      odd += counts[a] % 2;
      agree += hits[a].size() == counts[a];
    }
  }
  return {odd == total && agree == total,
          std::to_string(odd) + "/" + std::to_string(total) + " odd, " + std::to_string(agree) + " match enumeration"};
}

Outcome labeling_example() {
  const RunOutcome r = run(parse_problem(fixture("labeling_example.json")));
  const json want = json({1, 3});
  return {r.report["labels"] == want, "labels = " + r.report["labels"].dump()};
}

Outcome cosine() {
  const auto t0 = std::chrono::steady_clock::now();
  const RunOutcome r = run(parse_problem(fixture("cos_fixed_point.json")));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double y = r.report["point"][0][0].get<double>();
  const double res = r.report["residual"][0].get<double>();
  const auto rounds = r.report["rounds_used"].get<std::size_t>();
  const bool ok = r.report["converged"].get<bool>() && res <= 1e-6 && std::abs(y - 0.7390851) <= 1e-4 && rounds <= 60 && secs < 5;
  return {ok, fmt("Y = %.10f, residual = %.2e", y, res) + ", rounds = " + std::to_string(rounds)};
}

Outcome locality() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  int equal = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const double a1 = u(rng), a2 = u(rng);
    auto make = [](double a) {
      return [a](const Vec& x) {
        return vec({0.1 + 0.3 * (1 + std::sin(a * x(1))) / 2, 0.2 + 0.3 * (1 + std::cos(a * x(0))) / 2});
      };
    };
    const auto g1 = make(a1), g2 = make(a2);
    const auto s2 = uniform_space(2), s1 = make_space({1.0});
    const auto f = LocalFunction::atomwise(2, [&](std::size_t a, const Vec& x) { return a == 0 ? g1(x) : g2(x); });
    const FixedPointResult glued = solve_simplex_fixed_point(f, standard_simplex(s2, 2));
    const FixedPointResult one = solve_simplex_fixed_point(LocalFunction::uniform(2, g1), standard_simplex(s1, 2));
    const FixedPointResult two = solve_simplex_fixed_point(LocalFunction::uniform(2, g2), standard_simplex(s1, 2));
    equal += glued.point.at(0) == one.point.at(0) && glued.point.at(1) == two.point.at(0) && glued.converged;
  }
  return {equal == 20, std::to_string(equal) + "/20 glued runs bit-identical to one-atom runs"};
}

Outcome projection() {
  std::mt19937_64 rng(6);
  const auto s = uniform_space(3);
  double worst_vi = -1e300, worst_ne = -1e300;
  int kinds = 0;
  for (std::size_t d = 1; d <= 3; ++d) {
    std::uniform_real_distribution<double> u(0.2, 2.0);
    Eigen::VectorXd r(3);
    for (Eigen::Index a = 0; a < 3; ++a) r(a) = u(rng);
    const RandomPoint c = random_point(rng, s, d);
    RandomPoint hi = c;
    for (std::size_t a = 0; a < 3; ++a) hi.set(a, c.at(a) + Vec::Constant(static_cast<Eigen::Index>(d), u(rng)));
    const std::vector<ConvexBody> bodies = {ConvexBody::ball(c, RandomScalar(s, r)), ConvexBody::box(c, hi),
                                            ConvexBody::simplex(random_simplex(rng, s, d + 1, d))};
    for (const ConvexBody& k : bodies) {
      ++kinds;
      for (int draw = 0; draw < 1000; ++draw) {
        const RandomPoint x = random_point(rng, s, d, 3.0), y = random_point(rng, s, d, 3.0);
        const RandomPoint hx = project(k, x), hy = project(k, y);
        const RandomPoint z = project(k, random_point(rng, s, d, 3.0));
        const RandomScalar vi = inner(x - hx, z - hx), nh = norm(hx - hy), nx = norm(x - y);
        for (std::size_t a = 0; a < 3; ++a) {
          worst_vi = std::max(worst_vi, vi[a]);
          worst_ne = std::max(worst_ne, nh[a] - nx[a]);
        }
      }
    }
  }
  return {worst_vi <= 1e-8 && worst_ne <= 1e-8,
          fmt("max <x-h, z-h> = %.2e, max expansion = %.2e", worst_vi, worst_ne) + " over " + std::to_string(kinds) + " bodies"};
}

Outcome convex_bodies() {
  const auto s = make_space({1.0});
  const auto rot = LocalFunction::uniform(2, [](const Vec& x) { return vec({-x(1), x(0)}); });
  const FixedPointResult r = solve_convex_fixed_point(rot, ConvexBody::unit_ball(s, 2));
  const auto f = LocalFunction::uniform(2, [](const Vec& x) { return vec({0.5 + x(1) / 4, 0.5 - x(0) / 4}); });
  SolverConfig cfg;
  cfg.tol_residual = 1e-8;
  const FixedPointResult b =
      solve_convex_fixed_point(f, ConvexBody::box(RandomPoint::zero(s, 2), RandomPoint::constant(s, vec({1, 1}))), cfg);
  Eigen::Matrix2d a;
  a << 1, -0.25, 0.25, 1;
  const Eigen::Vector2d oracle = a.partialPivLu().solve(Eigen::Vector2d(0.5, 0.5));
  const double e_rot = r.point.at(0).norm(), e_box = (b.point.at(0) - Vec(oracle)).norm();
  return {r.converged && b.converged && e_rot <= 1e-4 && e_box <= 1e-6, fmt("|Y_rot| = %.2e, |Y_box - LU| = %.2e", e_rot, e_box)};
}

Outcome ivt() {
  RunOptions opt;
  opt.oracle_grid = 1;
  const RunOutcome r = run(parse_problem(fixture("ivt_two_atom.json")), opt);
  double worst = 0;
  for (const auto& d : r.report["oracle"]["distance"]) worst = std::max(worst, d.get<double>());
  const bool both = r.report["branch"] == json({"A", "A^c"});
  return {r.exit_code == 0 && both && worst <= 1e-5, fmt("max |V - bisection| = %.2e", worst) + ", branches " + r.report["branch"].dump()};
}

Outcome grid_oracle() {
  const auto s = make_space({1.0});
  double worst = 0;
  for (const BuiltinProblem& p : builtin_problems()) {
    const ConditionalSimplex t = p.simplex(s);
    const std::size_t res = p.dim() == 1 ? 10000 : 300;
    const SolverConfig cfg;
    const FixedPointResult r = solve_simplex_fixed_point(p.function(), t, cfg);
    const RandomPoint g = grid_fixed_point(p.function(), t, GridSpec{res});
    const double spacing = t.diameter()[0] / static_cast<double>(res);
    worst = std::max(worst, (g.at(0) - r.point.at(0)).norm() / (10 * (cfg.tol_residual + spacing)));
    if (!r.converged) return {false, p.name + " did not converge"};
  }
  return {worst <= 1, fmt("max distance / envelope = %.3f", worst)};
}

Outcome invariants() {
  std::mt19937_64 rng(10);
  double roundtrip = 0, affine = 0;
  int containment = 0, valid = 0, draws = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = uniform_space(1 + trial % 3);
    const std::size_t n = 2 + trial % 3;
    const ConditionalSimplex t = random_simplex(rng, s, n, n - 1);
    const RandomPoint x = random_inside(rng, t);
    ++draws;
    roundtrip = std::max(roundtrip, norm(combine(t.vertices(), t.coords(x)) - x).esssup());

    // Coordinates survive a common affine change of frame.
    const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n - 1)) * 2.5;
    const Vec shift = Vec::Constant(static_cast<Eigen::Index>(n - 1), 0.7);
    auto move = [&](const RandomPoint& p) {
      RandomPoint q = p;
      for (std::size_t a = 0; a < s->size(); ++a) q.set(a, m * p.at(a) + shift);
      return q;
    };
    std::vector<RandomPoint> moved;
    for (const auto& v : t.vertices()) moved.push_back(move(v));
    const ConvexWeights w0 = t.coords(x), w1 = ConditionalSimplex(moved).coords(move(x));
    for (std::size_t a = 0; a < s->size(); ++a)
      for (std::size_t i = 0; i < n; ++i) affine = std::max(affine, std::abs(w0(a, i) - w1(a, i)));

    const LocatedCells loc = locate_cell(t, x);
    bool inside = true;
    for (std::size_t a = 0; a < s->size(); ++a) {
      std::vector<Vec> cell;
      for (const RandomPoint& v : loc.cells[loc.partition.part_of(a)].vertices) cell.push_back(v.at(a));
      inside = inside && detail::AffineFrame(cell).solve(x.at(a), nullptr).minCoeff() >= -1e-12;
    }
    containment += inside;

    const Partition p = random_partition(rng, s, 3);
    std::vector<std::vector<RandomPoint>> lists;
    for (std::size_t i = 0; i < p.parts(); ++i) lists.push_back(random_simplex(rng, s, n, n - 1).vertices());
    valid += affinely_independent_everywhere(sigma_combine(p, std::span<const std::vector<RandomPoint>>(lists)).vertices());
  }
  const bool ok = roundtrip <= 1e-8 && affine <= 1e-8 && containment == draws && valid == draws;
  return {ok, fmt("round-trip %.1e, affine %.1e", roundtrip, affine) + ", located " + std::to_string(containment) + "/" +
                  std::to_string(draws) + ", glued simplices valid " + std::to_string(valid) + "/" + std::to_string(draws)};
}

}  // namespace

int main() {
  criterion(1, "subdivision diameter decay", diameter_decay);
  criterion(2, "odd completely labeled count", sperner_parity);
  criterion(3, "four-vertex two-atom labels", labeling_example);
  criterion(4, "cos fixed point", cosine);
  criterion(5, "locality of glued problems", locality);
  criterion(6, "projection characterization", projection);
  criterion(7, "convex bodies: rotation and box", convex_bodies);
  criterion(8, "two-atom intermediate value", ivt);
  criterion(9, "solver vs exhaustive grid", grid_oracle);
  criterion(10, "structural invariants", invariants);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
