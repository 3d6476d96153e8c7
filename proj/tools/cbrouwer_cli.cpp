// cbrouwer: batch front end for conditional fixed-point problems.
//
//   cbrouwer solve problem.json [--tol 1e-8] [--oracle grid:1000] [--trace t.csv]
//   cbrouwer ivt problem.json
//   cbrouwer audit-parity problem.json --depth 3
//   cbrouwer run problem.json --mode label
//
// Exit status: 0 converged (or non-solver command succeeded), 2 not converged,
// 1 error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cbrouwer.hpp"

namespace {

struct Args {
  std::string problem;
  std::string mode;
  double tol = 0.0;
  std::size_t max_rounds = 0;
  std::size_t cell_budget = 0;
  std::string oracle;
  std::string trace;
  std::string out;
  std::size_t depth = 1;
};

void add_common(CLI::App* cmd, Args& a) {
  cmd->add_option("problem", a.problem, "Problem file (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--tol", a.tol, "Residual tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-rounds", a.max_rounds, "Round limit")->check(CLI::PositiveNumber);
  cmd->add_option("--cell-budget", a.cell_budget, "Cell budget for subdivisions and lookahead")->check(CLI::PositiveNumber);
  cmd->add_option("--oracle", a.oracle, "Attach an oracle comparison, e.g. grid:1000");
  cmd->add_option("--trace", a.trace, "Write the per-round trace as CSV");
  cmd->add_option("--out", a.out, "Write the report here instead of stdout");
  cmd->add_option("--depth", a.depth, "Subdivision depth for subdivide, label and audit-parity")->check(CLI::PositiveNumber);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw cbrouwer::Error(cbrouwer::ErrorCode::ValidationError, "cannot write '" + path + "'");
  f << text;
}

int execute(const Args& a) {
  const cbrouwer::ProblemFile problem = cbrouwer::parse_problem(a.problem);
  cbrouwer::RunOptions opt;
  opt.mode = a.mode;
  if (a.tol > 0) opt.tol = a.tol;
  if (a.max_rounds > 0) opt.max_rounds = a.max_rounds;
  if (a.cell_budget > 0) opt.cell_budget = a.cell_budget;
  if (auto g = cbrouwer::detail::parse_oracle(a.oracle)) opt.oracle_grid = g->resolution;
  opt.depth = a.depth;

  const cbrouwer::RunOutcome r = cbrouwer::run(problem, opt);
  const std::string report = r.report.dump(2) + "\n";
  if (!a.trace.empty()) write_text(a.trace, r.trace);
  if (!r.csv.empty()) {
    std::cout << r.csv;
    if (!a.out.empty()) write_text(a.out, report);
  } else if (!a.out.empty()) {
    write_text(a.out, report);
  } else {
    std::cout << report;
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional Brouwer fixed points on finite probability spaces"};
  app.require_subcommand(1);
  Args args;
  const std::vector<std::string> modes = {"solve", "ivt", "subdivide", "label", "audit-parity", "project"};
  for (const std::string& m : modes) {
    CLI::App* cmd = app.add_subcommand(m, "Run the problem in " + m + " mode");
    add_common(cmd, args);
    cmd->callback([&args, m] { args.mode = m; });
  }
  CLI::App* run = app.add_subcommand("run", "Run the problem in its own mode or --mode");
  add_common(run, args);
  run->add_option("--mode", args.mode, "One of solve, ivt, subdivide, label, audit-parity, project")
      ->check(CLI::IsMember(modes));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    return execute(args);
  } catch (const cbrouwer::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
