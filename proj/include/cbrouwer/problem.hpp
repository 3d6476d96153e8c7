#ifndef CBROUWER_PROBLEM_HPP
#define CBROUWER_PROBLEM_HPP

/**
 * Problem files, dispatch and reports.  The file format is documented in
 * docs/schema.md.
 */

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "expression.hpp"
#include "oracle.hpp"
#include "solver.hpp"

namespace cbrouwer {

using json = nlohmann::json;

enum class GeometryKind { Simplex, Interval, Ball, Box };

struct ProblemFile {
  SpacePtr space;
  std::size_t dim = 0;
  GeometryKind kind = GeometryKind::Simplex;
  std::optional<ConditionalSimplex> simplex;  // simplex and interval geometries
  std::optional<ConvexBody> body;             // every geometry except a general simplex has one
  std::vector<std::vector<Expression>> functions;  // [atom][component]
  std::vector<std::string> constant_names;
  Eigen::MatrixXd constants;  // one row per name, one column per atom
  std::optional<RandomScalar> target;
  std::optional<RandomPoint> point;
  std::string mode = "solve";
  SolverConfig config;
  double margin = kDefaultEnclosingMargin;

  LocalFunction function() const {
    const auto fns = functions;
    const Eigen::MatrixXd c = constants;
    const std::size_t d = dim;
    return LocalFunction::atomwise(d, [fns, c, d](std::size_t atom, const Eigen::VectorXd& x) {
      Eigen::VectorXd y(static_cast<Eigen::Index>(d));
      const double* cv = c.rows() > 0 ? c.col(static_cast<Eigen::Index>(atom)).data() : nullptr;
      for (std::size_t j = 0; j < d; ++j) {
        try {
          y(static_cast<Eigen::Index>(j)) = fns[atom][j].eval(x.data(), cv);
        } catch (const Error& e) {
          throw AtomError(ErrorCode::EvalError, atom, std::string("component ") + std::to_string(j + 1) + ": " + e.what());
        }
      }
      return y;
    });
  }

  /// The simplex the subdivision-based commands work on.
  ConditionalSimplex working_simplex() const {
    if (simplex) return *simplex;
    return enclosing_simplex(*body, margin);
  }
};

namespace detail {

[[noreturn]] inline void invalid(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ValidationError, where + ": " + what);
}

inline double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) invalid(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) invalid(where, "number is not finite");
  return v;
}

inline Eigen::VectorXd vector_at(const json& j, std::size_t dim, const std::string& where) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
  if (j.is_number()) {
    if (dim != 1) invalid(where, "expected a vector of length " + std::to_string(dim));
    v(0) = number_at(j, where);
    return v;
  }
  if (!j.is_array() || j.size() != dim) invalid(where, "expected a vector of length " + std::to_string(dim));
  for (std::size_t i = 0; i < dim; ++i) v(static_cast<Eigen::Index>(i)) = number_at(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

/// A constant vector, or {"per_atom": [one vector per atom]}.
inline RandomPoint point_at(const json& j, const SpacePtr& space, std::size_t dim, const std::string& where) {
  const std::size_t k = space->size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(k));
  if (j.is_object()) {
    if (!j.contains("per_atom")) invalid(where, "object form needs \"per_atom\"");
    const json& list = j["per_atom"];
    if (!list.is_array() || list.size() != k) invalid(where, "\"per_atom\" needs one entry per atom (" + std::to_string(k) + ")");
    for (std::size_t a = 0; a < k; ++a)
      m.col(static_cast<Eigen::Index>(a)) = vector_at(list[a], dim, where + ".per_atom[" + std::to_string(a) + "]");
  } else {
    const Eigen::VectorXd v = vector_at(j, dim, where);
    for (std::size_t a = 0; a < k; ++a) m.col(static_cast<Eigen::Index>(a)) = v;
  }
  return RandomPoint(space, std::move(m));
}

/// A number, or {"per_atom": [one number per atom]}, or a bare list of K numbers.
inline RandomScalar scalar_at(const json& j, const SpacePtr& space, const std::string& where) {
  const std::size_t k = space->size();
  Eigen::VectorXd v(static_cast<Eigen::Index>(k));
  const json* list = nullptr;
  if (j.is_object() && j.contains("per_atom")) list = &j["per_atom"];
  else if (j.is_array()) list = &j;
  if (list) {
    if (list->size() != k) invalid(where, "needs one value per atom (" + std::to_string(k) + ")");
    for (std::size_t a = 0; a < k; ++a) v(static_cast<Eigen::Index>(a)) = number_at((*list)[a], where + "[" + std::to_string(a) + "]");
  } else {
    v.setConstant(number_at(j, where));
  }
  return RandomScalar(space, std::move(v));
}

inline std::size_t geometry_dim(const json& g) {
  const std::string kind = g.value("kind", "");
  if (g.contains("dim")) {
    if (!g["dim"].is_number_unsigned() || g["dim"].get<std::size_t>() < 1) invalid("geometry.dim", "expected a positive integer");
    return g["dim"].get<std::size_t>();
  }
  if (kind == "interval") return 1;
  auto infer = [](const json& p) -> std::size_t {
    const json* v = &p;
    if (p.is_object() && p.contains("per_atom") && p["per_atom"].is_array() && !p["per_atom"].empty()) v = &p["per_atom"][0];
    if (v->is_number()) return 1;
    if (v->is_array()) return v->size();
    return 0;
  };
  std::size_t d = 0;
  if (kind == "simplex" && g.contains("vertices") && g["vertices"].is_array() && !g["vertices"].empty()) d = infer(g["vertices"][0]);
  if (kind == "ball" && g.contains("center")) d = infer(g["center"]);
  if (kind == "box" && g.contains("lower")) d = infer(g["lower"]);
  if (d == 0) invalid("geometry", "cannot determine the dimension; add \"dim\"");
  return d;
}

inline Expression compile(const json& e, std::size_t dim, const std::vector<std::string>& names, const std::string& where) {
  if (!e.is_string()) invalid(where, "expected an expression string");
  try {
    return Expression::parse(e.get<std::string>(), dim, names);
  } catch (const ParseError& err) {
    throw ParseError(err.column(), where + ": " + err.message());
  }
}

/// E is a string (d = 1) or a list of d strings.
inline std::vector<Expression> compile_components(const json& e, std::size_t dim, const std::vector<std::string>& names,
                                                  const std::string& where) {
  std::vector<Expression> out;
  if (e.is_string()) {
    if (dim != 1) invalid(where, "expected a list of " + std::to_string(dim) + " expressions");
    out.push_back(compile(e, dim, names, where));
  } else if (e.is_array()) {
    if (e.size() != dim) invalid(where, "expected " + std::to_string(dim) + " expressions, got " + std::to_string(e.size()));
    for (std::size_t i = 0; i < dim; ++i) out.push_back(compile(e[i], dim, names, where + "[" + std::to_string(i) + "]"));
  } else {
    invalid(where, "expected an expression or a list of expressions");
  }
  return out;
}

inline void read_config(const json& c, SolverConfig& cfg, double& margin) {
  if (!c.is_object()) invalid("config", "expected an object");
  for (const auto& [key, value] : c.items()) {
    const std::string where = "config." + key;
    if (key == "tol_residual") cfg.tol_residual = number_at(value, where);
    else if (key == "tol_diam") cfg.tol_diam = number_at(value, where);
    else if (key == "max_rounds") cfg.max_rounds = static_cast<std::size_t>(number_at(value, where));
    else if (key == "cell_budget") cfg.cell_budget = static_cast<std::size_t>(number_at(value, where));
    else if (key == "lookahead") cfg.lookahead = static_cast<int>(number_at(value, where));
    else if (key == "margin") margin = number_at(value, where);
    else invalid(where, "unknown setting");
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    invalid("config", e.what());
  }
}

}  // namespace detail

/// Validates and resolves a problem given as JSON.
inline ProblemFile parse_problem_json(const json& j) {
  if (!j.is_object()) detail::invalid("problem", "expected a JSON object");
  ProblemFile p;
  // space
  if (!j.contains("space")) detail::invalid("space", "missing");
  {
    const json& s = j["space"];
    const json& atoms = s.is_object() ? s.value("atoms", json()) : s;
    if (!atoms.is_array() || atoms.empty()) detail::invalid("space.atoms", "expected a nonempty list of probabilities");
    std::vector<double> probs;
    for (std::size_t i = 0; i < atoms.size(); ++i) probs.push_back(detail::number_at(atoms[i], "space.atoms[" + std::to_string(i) + "]"));
    try {
      p.space = make_space(probs);
    } catch (const Error& e) {
      detail::invalid("space.atoms", e.what());
    }
  }
  const std::size_t k = p.space->size();
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) detail::invalid("mode", "expected a string");
    p.mode = j["mode"].get<std::string>();
  }
  // geometry
  if (!j.contains("geometry") || !j["geometry"].is_object()) detail::invalid("geometry", "missing or not an object");
  const json& g = j["geometry"];
  const std::string kind = g.value("kind", "");
  p.dim = detail::geometry_dim(g);
  try {
    if (kind == "simplex") {
      p.kind = GeometryKind::Simplex;
      if (!g.contains("vertices") || !g["vertices"].is_array() || g["vertices"].empty())
        detail::invalid("geometry.vertices", "expected a nonempty list");
      std::vector<RandomPoint> verts;
      for (std::size_t i = 0; i < g["vertices"].size(); ++i)
        verts.push_back(detail::point_at(g["vertices"][i], p.space, p.dim, "geometry.vertices[" + std::to_string(i) + "]"));
      p.simplex = ConditionalSimplex(std::move(verts));
      p.body = ConvexBody::simplex(*p.simplex);
    } else if (kind == "interval") {
      p.kind = GeometryKind::Interval;
      if (p.dim != 1) detail::invalid("geometry.dim", "an interval has dimension 1");
      const RandomScalar lo = detail::scalar_at(g.value("lower", json()), p.space, "geometry.lower");
      const RandomScalar hi = detail::scalar_at(g.value("upper", json()), p.space, "geometry.upper");
      for (std::size_t a = 0; a < k; ++a)
        if (!(lo[a] < hi[a])) throw AtomError(ErrorCode::ValidationError, a, "geometry: lower must be below upper");
      p.simplex = ConditionalSimplex({RandomPoint::from_scalar(lo), RandomPoint::from_scalar(hi)});
      p.body = ConvexBody::box(RandomPoint::from_scalar(lo), RandomPoint::from_scalar(hi));
    } else if (kind == "ball") {
      p.kind = GeometryKind::Ball;
      const RandomPoint c = g.contains("center") ? detail::point_at(g["center"], p.space, p.dim, "geometry.center")
                                                 : RandomPoint::zero(p.space, p.dim);
      const RandomScalar r = g.contains("radius") ? detail::scalar_at(g["radius"], p.space, "geometry.radius")
                                                  : RandomScalar::constant(p.space, 1.0);
      p.body = ConvexBody::ball(c, r);
    } else if (kind == "box") {
      p.kind = GeometryKind::Box;
      if (!g.contains("lower") || !g.contains("upper")) detail::invalid("geometry", "a box needs \"lower\" and \"upper\"");
      p.body = ConvexBody::box(detail::point_at(g["lower"], p.space, p.dim, "geometry.lower"),
                               detail::point_at(g["upper"], p.space, p.dim, "geometry.upper"));
    } else {
      detail::invalid("geometry.kind", "expected simplex, interval, ball or box");
    }
  } catch (const AtomError& e) {
    if (e.code() == ErrorCode::ValidationError) throw;
    throw AtomError(ErrorCode::ValidationError, e.atom(), std::string("geometry: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ValidationError) throw;
    detail::invalid("geometry", e.what());
  }
  // constants
  if (j.contains("constants")) {
    const json& c = j["constants"];
    if (!c.is_object()) detail::invalid("constants", "expected an object");
    p.constants.resize(static_cast<Eigen::Index>(c.size()), static_cast<Eigen::Index>(k));
    Eigen::Index row = 0;
    for (const auto& [name, value] : c.items()) {
      if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
        detail::invalid("constants." + name, "not a valid name");
      p.constant_names.push_back(name);
      p.constants.row(row++) = detail::scalar_at(value, p.space, "constants." + name).values().transpose();
    }
  }
  // function
  if (!j.contains("function")) detail::invalid("function", "missing");
  {
    const json& f = j["function"];
    if (f.is_object() && f.contains("per_atom")) {
      const json& list = f["per_atom"];
      if (!list.is_array() || (list.size() != 1 && list.size() != k))
        detail::invalid("function.per_atom", "expected 1 or " + std::to_string(k) + " entries");
      for (std::size_t a = 0; a < k; ++a) {
        const std::size_t src = list.size() == 1 ? 0 : a;
        p.functions.push_back(detail::compile_components(list[src], p.dim, p.constant_names,
                                                         "function.per_atom[" + std::to_string(src) + "]"));
      }
    } else {
      const json& shared = f.is_object() && f.contains("shared") ? f["shared"] : f;
      const auto comps = detail::compile_components(shared, p.dim, p.constant_names, "function");
      p.functions.assign(k, comps);
    }
  }
  if (j.contains("target")) p.target = detail::scalar_at(j["target"], p.space, "target");
  if (j.contains("point")) p.point = detail::point_at(j["point"], p.space, p.dim, "point");
  if (j.contains("config")) detail::read_config(j["config"], p.config, p.margin);
  return p;
}

inline ProblemFile parse_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ValidationError, "cannot open problem file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(col, path + ": line " + std::to_string(line) + ": malformed JSON");
  }
  return parse_problem_json(j);
}

// ---------------------------------------------------------------------------
// Reports

inline json to_json(const RandomPoint& p) {
  json out = json::array();
  for (std::size_t a = 0; a < p.atoms(); ++a) {
    json v = json::array();
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(p.dim()); ++i) v.push_back(p.values()(i, static_cast<Eigen::Index>(a)));
    out.push_back(std::move(v));
  }
  return out;
}

inline json to_json(const RandomScalar& s) {
  json out = json::array();
  for (std::size_t a = 0; a < s.atoms(); ++a) out.push_back(s[a]);
  return out;
}

inline json to_json(const FixedPointResult& r) {
  json out;
  out["status"] = std::string(to_string(r.status));
  out["converged"] = r.converged;
  out["rounds_used"] = r.rounds_used;
  out["point"] = to_json(r.point);
  out["residual"] = to_json(r.residual);
  json st = json::array();
  for (SolveStatus s : r.atom_status) st.push_back(std::string(to_string(s)));
  out["atom_status"] = st;
  out["atom_rounds"] = r.atom_rounds;
  out["diam_trace"] = r.diam_trace;
  out["backtracks"] = r.backtracks;
  out["label_evaluations"] = r.evaluations;
  json cert;
  cert["complete"] = r.certificate.complete;
  json verts = json::array();
  for (const RandomPoint& v : r.certificate.vertices) verts.push_back(to_json(v));
  cert["vertices"] = verts;
  json labels = json::array();
  for (const LabelField& l : r.certificate.labels) labels.push_back(l.values());
  cert["labels"] = labels;
  json depth = json::array();
  for (std::size_t d : r.certificate.depth)
    depth.push_back(d == std::numeric_limits<std::size_t>::max() ? json(nullptr) : json(d));
  cert["depth"] = depth;
  out["certificate"] = cert;
  return out;
}

/// CSV rows round,atom,diam,residual,x1..xd.
inline std::string trace_csv(const FixedPointResult& r) {
  std::ostringstream os;
  os.precision(17);
  const std::size_t d = r.point.dim();
  os << "round,atom,diam,residual";
  for (std::size_t i = 1; i <= d; ++i) os << ",x" << i;
  os << "\n";
  for (std::size_t a = 0; a < r.history.size(); ++a)
    for (const detail::RoundRecord& rec : r.history[a]) {
      os << rec.round << "," << a << "," << rec.diam << "," << rec.residual;
      for (Eigen::Index i = 0; i < rec.point.size(); ++i) os << "," << rec.point(i);
      os << "\n";
    }
  return os.str();
}

struct RunOptions {
  std::string mode;  // empty: the problem's own mode
  std::optional<double> tol;
  std::optional<std::size_t> max_rounds;
  std::optional<std::size_t> cell_budget;
  std::optional<std::size_t> oracle_grid;
  std::size_t depth = 1;
};

struct RunOutcome {
  json report;
  std::string csv;    // audit-parity output
  std::string trace;  // solver trace, when a solver ran
  int exit_code = 0;
};

namespace detail {

inline std::optional<GridSpec> parse_oracle(const std::string& spec) {
  if (spec.empty()) return std::nullopt;
  const std::string prefix = "grid:";
  if (spec.rfind(prefix, 0) != 0) throw Error(ErrorCode::InvalidConfig, "oracle must look like grid:<resolution>");
  try {
    std::size_t used = 0;
    const unsigned long r = std::stoul(spec.substr(prefix.size()), &used);
    if (used != spec.size() - prefix.size() || r < 1) throw std::invalid_argument("bad");
    return GridSpec{static_cast<std::size_t>(r)};
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidConfig, "oracle resolution must be a positive integer");
  }
}

inline json oracle_block(const RandomPoint& oracle, const RandomPoint& solver, const std::string& kind, double spacing) {
  json out;
  out["kind"] = kind;
  out["point"] = to_json(oracle);
  out["distance"] = to_json(norm(solver - oracle));
  out["spacing"] = spacing;
  return out;
}

inline json cells_json(const std::vector<SubdivisionCell>& cells) {
  json out = json::array();
  for (const SubdivisionCell& c : cells) {
    auto one_based = [](const Permutation& p) {
      json out = json::array();
      for (std::size_t i : p) out.push_back(i + 1);
      return out;
    };
    json cell;
    cell["perm"] = one_based(c.perm);
    json path = json::array();
    for (const Permutation& p : c.parent_path) path.push_back(one_based(p));
    cell["path"] = path;
    json verts = json::array();
    for (const RandomPoint& v : c.vertices) verts.push_back(to_json(v));
    cell["vertices"] = verts;
    out.push_back(cell);
  }
  return out;
}

}  // namespace detail

inline RunOutcome run(const ProblemFile& problem, const RunOptions& opt = {}) {
  SolverConfig cfg = problem.config;
  if (opt.tol) cfg.tol_residual = *opt.tol;
  if (opt.max_rounds) cfg.max_rounds = *opt.max_rounds;
  if (opt.cell_budget) cfg.cell_budget = *opt.cell_budget;
  cfg.validate();
  const std::string mode = opt.mode.empty() ? problem.mode : opt.mode;
  const LocalFunction f = problem.function();
  RunOutcome out;
  out.report["mode"] = mode;
  out.report["atoms"] = problem.space->size();
  out.report["dim"] = problem.dim;

  auto finish = [&](const FixedPointResult& r) {
    json body = to_json(r);
    for (auto it = body.begin(); it != body.end(); ++it) out.report[it.key()] = it.value();
    out.trace = trace_csv(r);
    out.exit_code = r.converged ? 0 : 2;
  };

  if (mode == "solve") {
    if (problem.kind == GeometryKind::Simplex || problem.kind == GeometryKind::Interval) {
      const FixedPointResult r = solve_simplex_fixed_point(f, *problem.simplex, cfg);
      finish(r);
      if (opt.oracle_grid) {
        const RandomPoint g = grid_fixed_point(f, *problem.simplex, GridSpec{*opt.oracle_grid});
        out.report["oracle"] = detail::oracle_block(g, r.point, "grid:" + std::to_string(*opt.oracle_grid),
                                                    problem.simplex->diameter().esssup() / static_cast<double>(*opt.oracle_grid));
      }
    } else {
      const FixedPointResult r = solve_convex_fixed_point(f, *problem.body, cfg, problem.margin);
      finish(r);
      if (opt.oracle_grid) {
        const ConditionalSimplex s = enclosing_simplex(*problem.body, problem.margin);
        const ConvexBody& k = *problem.body;
        const LocalFunction fh = LocalFunction::atomwise(problem.dim, [&f, &k, &problem](std::size_t a, const Eigen::VectorXd& y) {
          return f.at(a, k.project_atom(a, y), problem.space);
        });
        const RandomPoint g = project(k, grid_fixed_point(fh, s, GridSpec{*opt.oracle_grid}));
        out.report["oracle"] = detail::oracle_block(g, r.point, "grid:" + std::to_string(*opt.oracle_grid),
                                                    s.diameter().esssup() / static_cast<double>(*opt.oracle_grid));
      }
    }
  } else if (mode == "ivt") {
    if (problem.kind != GeometryKind::Interval) throw Error(ErrorCode::ValidationError, "ivt mode needs an interval geometry");
    if (!problem.target) throw Error(ErrorCode::ValidationError, "ivt mode needs a \"target\"");
    const RandomScalar lo = problem.simplex->vertex(0).component(0);
    const RandomScalar hi = problem.simplex->vertex(1).component(0);
    const FixedPointResult r = ivt_solve(f, lo, hi, *problem.target, cfg);
    finish(r);
    out.report["target"] = to_json(*problem.target);
    json branch = json::array();
    for (std::size_t a = 0; a < lo.atoms(); ++a) {
      const double fl = f.at(a, Eigen::VectorXd::Constant(1, lo[a]), problem.space)(0);
      const double fh = f.at(a, Eigen::VectorXd::Constant(1, hi[a]), problem.space)(0);
      branch.push_back(fl <= fh ? "A" : "A^c");
    }
    out.report["branch"] = branch;
    if (opt.oracle_grid) {
      const RandomScalar& y = *problem.target;
      const RandomScalar root = bisection_root(
          [&](std::size_t a, double v) { return f.at(a, Eigen::VectorXd::Constant(1, v), problem.space)(0) - y[a]; }, lo, hi,
          1e-13);
      out.report["oracle"] = detail::oracle_block(RandomPoint::from_scalar(root), r.point, "bisection", 1e-13);
    }
  } else if (mode == "project") {
    if (!problem.point) throw Error(ErrorCode::ValidationError, "project mode needs a \"point\"");
    out.report["point"] = to_json(*problem.point);
    out.report["projection"] = to_json(project(*problem.body, *problem.point));
  } else if (mode == "subdivide") {
    const auto cells = m_fold_subdivide(problem.working_simplex(), opt.depth, cfg.cell_budget);
    out.report["depth"] = opt.depth;
    out.report["cells"] = detail::cells_json(cells);
  } else if (mode == "label") {
    const ConditionalSimplex s = problem.working_simplex();
    if (problem.point) {
      out.report["point"] = to_json(*problem.point);
      out.report["labels"] = canonical_label(f, s, *problem.point).values();
    } else {
      const auto cells = m_fold_subdivide(s, opt.depth, cfg.cell_budget);
      const LabeledVertexSet set = label_vertices(f, s, cells);
      json pts = json::array();
      for (std::size_t i = 0; i < set.vertices.size(); ++i)
        pts.push_back(json{{"point", to_json(set.vertices[i])}, {"labels", set.labels[i].values()}});
      out.report["depth"] = opt.depth;
      out.report["vertices"] = pts;
      out.report["proper"] = is_proper(set);
    }
  } else if (mode == "audit-parity") {
    const ConditionalSimplex s = problem.working_simplex();
    const auto cells = m_fold_subdivide(s, opt.depth, cfg.cell_budget);
    const LabeledVertexSet set = label_vertices(f, s, cells);
    const auto counts = parity_audit(cells, set);
    std::ostringstream csv;
    csv << "atom_index,completely_labeled_count,parity_ok\n";
    bool all_odd = true;
    for (std::size_t a = 0; a < counts.size(); ++a) {
      csv << a << "," << counts[a] << "," << (counts[a] % 2 == 1 ? "true" : "false") << "\n";
      all_odd = all_odd && counts[a] % 2 == 1;
    }
    out.csv = csv.str();
    out.report["depth"] = opt.depth;
    out.report["counts"] = counts;
    out.report["parity_ok"] = all_odd;
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown mode '" + mode + "'");
  }
  return out;
}

}  // namespace cbrouwer

#endif  // CBROUWER_PROBLEM_HPP
