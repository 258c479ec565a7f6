#pragma once
//
// Seeded property suites over the graded-space axioms, the tame-problem
// contracts, the compactness machinery, and the continuation trace. Shared
// by the CLI `props` subcommand and the acceptance tests.
//

#include <cstdint>
#include <string>
#include <vector>

#include "nme/continuation.hpp"
#include "nme/tame_problems.hpp"

namespace nme {

struct PropertyResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Graded-space axioms ---------------------------------------------------------

/// Metric symmetry, triangle inequality, translation invariance and
/// identity-of-indiscernibles on `count` random triples (relative 1e-12).
PropertyResult metric_axioms_property(const SpecPtr& spec, std::uint64_t seed, int count);

/// Norm nesting ||x||_{n-1} <= ||x||_n (exact) and absolute homogeneity
/// (relative 1e-12) on `count` random elements.
PropertyResult nesting_homogeneity_property(const SpecPtr& spec, std::uint64_t seed, int count);

/// Convergence in every norm iff metric convergence, up to the certified
/// truncation slack of the level-truncated metric.
PropertyResult convergence_equivalence_property(const SpecPtr& spec, std::uint64_t seed);

/// box_contains(x, s, 0) agrees with the direct per-level norm re-check.
PropertyResult box_recheck_property(const SpecPtr& spec, std::uint64_t seed, int count);

// Compactness machinery -------------------------------------------------------

PropertyResult sup_norms_monotone_property(const SpecPtr& spec, std::uint64_t seed);

/// Alternating-sign sequence: extraction picks one parity class.
PropertyResult extraction_alternating_property(const SpecPtr& spec);

/// 1/(k+1)-decay sequence: extraction lands in the Cauchy tail; both audits
/// brute-force all pairwise per-level distances against the 2*tol diameter.
PropertyResult extraction_decay_property(const SpecPtr& spec);

/// membership_via_distances agrees with direct membership on seeded cases.
PropertyResult membership_agreement_property(const SpecPtr& spec, std::uint64_t seed, int cases);

// Tame-problem contracts ------------------------------------------------------

/// Difference-quotient gap to dderiv shrinks >= 8x per decade over
/// t in {1e-2, 1e-3, 1e-4} at every level (or sits below the roundoff floor).
PropertyResult fd_ladder_property(const TameProblem& problem, std::uint64_t seed, int pairs);

/// ||f'(x; right_inverse(x,v)) - v||_n <= 1e-8 (1 + ||v||_n) for n <= N-d.
PropertyResult inverse_consistency_property(const TameProblem& problem, std::uint64_t seed,
                                            int draws);

/// Box inclusion: right_inverse maps sampled Pi_{b.s} targets into Pi_s.
PropertyResult inclusion_property(const TameProblem& problem, std::uint64_t seed, int samples,
                                  int base_points, double slack);

PropertyResult zero_fixed_point_property(const TameProblem& problem);

// Continuation ---------------------------------------------------------------

/// Audits a finished trace: accepted defects <= r*eps, residuals <=
/// t*eps + 1e-12, t strictly increasing across acceptances, halving strictly
/// decreasing inside each rejection chain.
PropertyResult trace_audit_property(const std::string& name, const SolveOutcome& outcome,
                                    double eps);

/// For problems whose tame contract is exact: x(t) stays in t-scaled boxes.
PropertyResult box_invariant_property(const std::string& name, const SolveOutcome& outcome);

/// ||x_solve - x_newton||_0 <= 10 max(eps, tol).
PropertyResult oracle_equivalence_property(const TameProblem& problem, const GradedElement& y,
                                           double eps, double tol);

/// Identical inputs give byte-identical trace CSV.
PropertyResult determinism_property(const TameProblem& problem, const GradedElement& y,
                                    const ContinuationConfig& config);

/// The full battery at the default desk scale.
std::vector<PropertyResult> run_all_properties(std::uint64_t seed);

}  // namespace nme
