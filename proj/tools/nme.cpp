//
// Command-line front end: solve f(x)=y on a graded space, verify the
// per-level conclusion bounds, or run the seeded property suites.
//
// Exit codes: 0 success, 1 usage/IO error, 2 mathematical failure.
//

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "nme/continuation.hpp"
#include "nme/io.hpp"
#include "nme/properties.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMath = 2;

struct ProblemFlags {
  std::string problem = "identity";
  double mu = 1.0;
  int degree = 16;      // K
  int levels = 4;       // N
  int oversampling = 4; // q
  std::string config_path;
};

struct RunFlags {
  std::string target = "sin:1:1";
  double eps = 1e-3;
  double r0 = 0.125;
  double r_min = 0x1.0p-20;
  double growth = 2.0;
  int max_steps = 500000;
  int monitored = 0;
  double slack = 1e-6;
  std::uint64_t seed = 20200829;
  std::string out_trace;
  std::string out_report;
};

void add_problem_flags(CLI::App& cmd, ProblemFlags& flags) {
  cmd.add_option("--problem", flags.problem,
                 "identity | quadratic | smoothing | nonlinear_smoothing");
  cmd.add_option("--mu", flags.mu, "nonlinearity strength for the quadratic families");
  cmd.add_option("--K", flags.degree, "max Fourier degree");
  cmd.add_option("--N", flags.levels, "max norm level");
  cmd.add_option("--q", flags.oversampling, "grid oversampling factor");
  cmd.add_option("--config", flags.config_path,
                 "problem config JSON (overrides the problem flags)");
}

void add_run_flags(CLI::App& cmd, RunFlags& flags) {
  cmd.add_option("--y", flags.target, "target: sin:k:amp / cos:k:amp joined by '+', or @file.json");
  cmd.add_option("--eps", flags.eps, "per-level step-defect target");
  cmd.add_option("--r0", flags.r0, "initial trial step");
  cmd.add_option("--rmin", flags.r_min, "step underflow threshold");
  cmd.add_option("--growth", flags.growth, "trial-step growth after acceptance");
  cmd.add_option("--max-steps", flags.max_steps, "cap on attempted steps");
  cmd.add_option("--levels", flags.monitored, "monitor levels 0..L");
  cmd.add_option("--slack", flags.slack, "relative slack for bound checks");
  cmd.add_option("--seed", flags.seed, "seed for all sampling")
      ->envname("NME_SEED");
  cmd.add_option("--out-trace", flags.out_trace, "trace CSV path");
  cmd.add_option("--out-report", flags.out_report, "report JSON path");
}

nme::TameProblem build_problem(const ProblemFlags& flags) {
  nlohmann::json config;
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw nme::config_error("cannot open config " + flags.config_path);
    in >> config;
  } else {
    config = {{"problem", flags.problem}, {"mu", flags.mu},          {"K", flags.degree},
              {"N", flags.levels},        {"q", flags.oversampling}};
  }
  return nme::problem_from_config(config);
}

nme::GradedElement build_target(const nme::SpecPtr& spec, const std::string& text) {
  if (!text.empty() && text.front() == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw nme::config_error("cannot open target file " + text.substr(1));
    nlohmann::json j;
    in >> j;
    return nme::element_from_json(spec, j);
  }
  return nme::parse_target(spec, text);
}

nme::ContinuationConfig to_config(const RunFlags& flags, bool enforce_tame) {
  nme::ContinuationConfig config;
  config.eps = flags.eps;
  config.r0 = flags.r0;
  config.r_min = flags.r_min;
  config.growth = flags.growth;
  config.max_steps = flags.max_steps;
  config.monitored_levels = flags.monitored;
  config.bound_slack = flags.slack;
  config.enforce_tame = enforce_tame;
  return config;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw nme::config_error("cannot write " + path);
  out << text;
}

void maybe_write_outputs(const RunFlags& flags, const nme::SolveOutcome& outcome,
                         const nlohmann::json& report) {
  if (!flags.out_trace.empty()) {
    std::ostringstream csv;
    outcome.trace.write_csv(csv);
    write_text(flags.out_trace, csv.str());
  }
  if (!flags.out_report.empty()) write_text(flags.out_report, report.dump(2) + "\n");
}

int cmd_solve(const ProblemFlags& problem_flags, const RunFlags& run_flags) {
  const nme::TameProblem problem = build_problem(problem_flags);
  const nme::GradedElement y = build_target(problem.spec, run_flags.target);
  const nme::SolveOutcome outcome = nme::solve(problem, y, to_config(run_flags, true));

  maybe_write_outputs(run_flags, outcome, nme::outcome_to_json(outcome));

  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", outcome.t_final);
  std::cout << "status=" << nme::to_string(outcome.status) << " t=" << buf
            << " steps=" << outcome.trace.records.size() << "\n";
  if (!outcome.message.empty()) std::cout << outcome.message << "\n";
  return outcome.residual_ok() ? kExitOk : kExitMath;
}

int cmd_verify(const ProblemFlags& problem_flags, const RunFlags& run_flags) {
  const nme::TameProblem problem = build_problem(problem_flags);
  const nme::GradedElement y = build_target(problem.spec, run_flags.target);

  // Record-only tame mode: a broken c must reach the bound report, not abort.
  const nme::SolveOutcome outcome = nme::solve(problem, y, to_config(run_flags, false));

  nlohmann::json report;
  report["solve"] = nme::outcome_to_json(outcome);
  bool pass = outcome.residual_ok();
  if (outcome.success()) {
    const nme::BoundReport bounds =
        nme::verify_theorem_bounds(outcome, problem, y, run_flags.slack, run_flags.eps);
    report["theorem_bounds"] = nme::bound_report_to_json(bounds);
    const nme::TameCheckReport at_zero = nme::check_tame_at(
        problem, nme::GradedElement::zero(problem.spec), y, run_flags.slack);
    const nme::TameCheckReport at_solution =
        nme::check_tame_at(problem, outcome.x_final, y, run_flags.slack);
    report["tame_at_zero"] = nme::tame_report_to_json(at_zero);
    report["tame_at_solution"] = nme::tame_report_to_json(at_solution);
    report["c_provenance"] = problem.c_provenance;
    report["c"] = nme::bound_seq_to_json(problem.c);
    pass = pass && bounds.pass && at_zero.pass && at_solution.pass;
  }
  report["pass"] = pass;

  maybe_write_outputs(run_flags, outcome, report);
  std::cout << (pass ? "verify: pass" : "verify: FAIL") << "\n";
  return pass ? kExitOk : kExitMath;
}

int cmd_props(const RunFlags& run_flags) {
  const std::vector<nme::PropertyResult> results = nme::run_all_properties(run_flags.seed);
  nlohmann::json report = nlohmann::json::array();
  bool pass = true;
  for (const nme::PropertyResult& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    report.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    pass = pass && r.pass;
  }
  if (!run_flags.out_report.empty()) write_text(run_flags.out_report, report.dump(2) + "\n");
  std::cout << (pass ? "all properties pass" : "property failures") << "\n";
  return pass ? kExitOk : kExitMath;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuation solver on truncated graded spaces of periodic functions"};
  app.require_subcommand(1);

  ProblemFlags problem_flags;
  RunFlags run_flags;

  CLI::App* solve_cmd = app.add_subcommand("solve", "path-follow f(x)=y and certify residuals");
  add_problem_flags(*solve_cmd, problem_flags);
  add_run_flags(*solve_cmd, run_flags);

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "solve, then audit the per-level norm bounds");
  add_problem_flags(*verify_cmd, problem_flags);
  add_run_flags(*verify_cmd, run_flags);

  CLI::App* props_cmd = app.add_subcommand("props", "run the seeded property suites");
  add_run_flags(*props_cmd, run_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(problem_flags, run_flags);
    if (verify_cmd->parsed()) return cmd_verify(problem_flags, run_flags);
    if (props_cmd->parsed()) return cmd_props(run_flags);
    std::cerr << "no subcommand\n";
    return kExitUsage;
  } catch (const nme::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nme::spec_mismatch_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nme::length_mismatch_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMath;
  }
}
