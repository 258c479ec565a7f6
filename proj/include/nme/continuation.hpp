#pragma once
//
// Continuation solver for f(x) = y between graded spaces.
//
// The path f(x(t)) ~ t*y is followed from t = 0 to t = 1. Each step solves
// the linearized equation through the problem's right inverse and is accepted
// only when the step defect ||f(x + r h) - f(x) - r y||_n stays below r*eps
// at every monitored level; accepted defects telescope, so the residual at
// parameter t is bounded by t*eps throughout. On success the per-level bound
// ||x||_n <= c_n ||y||_{n+d} is certified against the recorded trace.
//

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nme/tame_problems.hpp"

namespace nme {

struct ContinuationConfig {
  double eps = 1e-6;          // per-level step-defect target
  double r0 = 0.125;          // initial trial step
  double r_min = 0x1.0p-20;   // halving underflow threshold
  double growth = 2.0;        // trial-step growth after acceptance
  int max_steps = 500000;     // cap on attempted steps (accepted + rejected)
  int monitored_levels = -1;  // certify levels 0..N_mon; -1 means N
  double bound_slack = 1e-6;  // slack for the conclusion bound check
  double tame_slack = 0.1;    // slack before an h-box violation is an error
  bool enforce_tame = true;   // false records h-box violations without aborting

  /// Resolved N_mon for a given grading.
  int resolved_levels(const GradingSpec& spec) const;
  void validate(const GradingSpec& spec) const;
};

enum class SolveStatus {
  success,
  step_underflow,   // halving hit r_min on defect rejections
  guard_exit,       // the path left the right-inverse domain
  max_steps_exceeded,
  tame_violation,   // h broke its Pi_s box beyond tame_slack
};

std::string to_string(SolveStatus status);

enum class RejectCause { none, defect, guard };

struct StepRecord {
  double t_before = 0.0;
  double r = 0.0;
  bool accepted = false;
  RejectCause cause = RejectCause::none;
  std::vector<double> defect;      // ||f(x+rh)-f(x)-r y||_n, monitored levels
  std::vector<double> residual;    // ||f(x)-t y||_n at the post-attempt state
  std::vector<double> state_norm;  // ||x||_n at the post-attempt state
  std::vector<double> bound;       // t * c_n ||y||_{n+d}; +inf above N-d
  bool box_ok = true;              // state_norm <= bound * (1 + tame_slack)
};

struct ContinuationTrace {
  int monitored_levels = 0;
  std::vector<StepRecord> records;

  /// Columns: t,r,accepted,defect_0..,resid_0..,norm_0..,bound_0..
  void write_csv(std::ostream& out) const;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::success;
  GradedElement x_final;
  double t_final = 0.0;
  ContinuationTrace trace;
  std::vector<bool> residual_certified;  // ||f(x)-y||_n <= eps + roundoff slack
  std::vector<bool> bound_certified;     // ||x||_n <= c_n ||y||_{n+d} (1+slack)
  std::string message;

  bool success() const { return status == SolveStatus::success; }
  bool residual_ok() const;
};

struct StepCheck {
  bool accepted = false;
  RejectCause cause = RejectCause::none;
  std::vector<double> defect;
  GradedElement f_trial;  // f(x + r h), valid when the guard held
};

/// One acceptance test of the proof's step inequality at levels 0..levels.
StepCheck step_acceptable(const TameProblem& problem, const GradedElement& x,
                          const GradedElement& h, const GradedElement& y, double r,
                          double eps, int levels);

SolveOutcome solve(const TameProblem& problem, const GradedElement& y,
                   const ContinuationConfig& config);

struct BoundReport {
  std::vector<double> ratio;          // ||x||_n / (c_n ||y||_{n+d}), n <= N-d
  std::vector<bool> bound_pass;       // per level, slack applied
  std::vector<double> residual_recheck;  // distance_at_level(y, {f(x)}, n)
  std::vector<bool> residual_pass;
  bool pass = false;
};

/// Post-hoc audit of the conclusion: per-level bound at n <= N-d and the
/// residual re-derived as a distance to the one-point set {f(x_final)}.
BoundReport verify_theorem_bounds(const SolveOutcome& outcome, const TameProblem& problem,
                                  const GradedElement& y, double slack, double eps);

/// Damped Newton iteration on the dense (2K+1)-coefficient system, used only
/// to cross-check `solve`. Stops when norm(f(x)-y, 0) <= tol; throws
/// newton_divergence_error after max_iter sweeps without reaching it.
GradedElement dense_newton_oracle(const TameProblem& problem, const GradedElement& y,
                                  double tol, int max_iter);

}  // namespace nme
