#pragma once
//
// Problem abstraction: a map f between graded spaces together with its
// directional derivative, a right inverse of the derivative, and the tame
// bound data (per-level constants c_n, derivative loss d). The right inverse
// promises f'(x; u) = v with ||u||_n <= c_n ||v||_{n+d}, uniformly over the
// guarded domain. A small catalog of concrete instances is provided.
//

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nme/graded_space.hpp"
#include "nme/sampling.hpp"

namespace nme {

struct TameProblem {
  SpecPtr spec;
  std::string name;
  std::function<GradedElement(const GradedElement&)> eval;
  std::function<GradedElement(const GradedElement&, const GradedElement&)> dderiv;
  std::function<GradedElement(const GradedElement&, const GradedElement&)> right_inverse;
  std::function<bool(const GradedElement&)> domain_guard;
  BoundSeq c;                 // length N+1, entries > 0
  int derivative_loss = 0;    // d
  std::string c_provenance;   // "analytic" | "estimated" | "supplied"

  /// Highest level at which the tame bound pairs ||u||_n with ||v||_{n+d}
  /// inside the truncation: N - d. Levels above are exempt in every check.
  int top_bound_level() const { return spec->max_level() - derivative_loss; }
};

/// Construction-time sanity: f(0) = 0 to 1e-12 at every level, c_n > 0,
/// 0 <= d <= N. Called by every factory; throws config_error.
void validate_problem(const TameProblem& problem);

// Catalog -------------------------------------------------------------------

/// f(x) = x. d = 0, c = 1.
TameProblem make_identity_problem(SpecPtr spec);

/// f(x) = x + mu * x^2 (pointwise square on the grid, projected back to
/// degree K). Guarded by min(1 + 2 mu x) >= 1/2; d = 0, c estimated.
TameProblem make_quadratic_problem(SpecPtr spec, double mu);

/// f(x) = S x with the smoothing multiplier sigma_k = 1/(1+k). Inverting the
/// derivative costs one level: d = 1, c = 2 (per-mode ratio (1+k)/k <= 2).
TameProblem make_smoothing_problem(SpecPtr spec);

/// f(x) = S x + mu (S x)^2, guarded like the quadratic problem; d = 1,
/// c estimated.
TameProblem make_nonlinear_smoothing_problem(SpecPtr spec, double mu);

// Operations ----------------------------------------------------------------

/// Difference quotient (f(x + t h) - f(x)) / t; the independent derivative
/// oracle. Throws guard_error when x or x + t h leaves the guarded domain.
GradedElement directional_derivative_fd(const TameProblem& problem, const GradedElement& x,
                                        const GradedElement& h, double t);

struct TameCheckReport {
  std::vector<double> inverse_residual;  // ||f'(x; u) - v||_n, n = 0..N
  std::vector<double> bound_ratio;       // ||u||_n / (c_n ||v||_{n+d}), 0/0 -> 0
  std::vector<bool> level_exempt;        // true above N - d
  bool pass = false;
};

/// Evaluates u = right_inverse(x, v) and audits both halves of the tame
/// contract. pass requires bound_ratio <= 1 + slack on non-exempt levels and
/// inverse_residual <= residual_tol * (1 + ||v||_n) everywhere.
TameCheckReport check_tame_at(const TameProblem& problem, const GradedElement& x,
                              const GradedElement& v, double slack,
                              double residual_tol = 1e-8);

/// Draws `samples` random v with ||v||_{n+d} <= (1/c_n) s_n for n <= N-d
/// (flat random elements rescaled to the box) and checks
/// right_inverse(x, v) in Pi_s within slack. Levels above N-d are unbounded.
bool sampled_box_inclusion(const TameProblem& problem, const GradedElement& x,
                           const BoundSeq& s, int samples, double slack, Rng& rng);

/// Empirical c_n = 1.1 * max over trials of ||right_inverse(x, v)||_n /
/// ||v||_{n+d}, estimated for n = 0..levels (at most N-d; -1 means N-d) and
/// extended constantly above. Draws mix single-mode and flat multiband v
/// (1:3); base points alternate between small interior states and
/// near-guard-boundary states so the constant covers the whole guarded
/// domain. Requires trials >= 100.
BoundSeq estimate_constants(const TameProblem& problem, int trials, std::uint64_t seed,
                            int levels = -1);

}  // namespace nme
