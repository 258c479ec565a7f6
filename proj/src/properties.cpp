#include "nme/properties.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nme/compactness.hpp"
#include "nme/sampling.hpp"

namespace nme {

namespace {

constexpr double kRelTol = 1e-12;

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(3);
  out << v;
  return out.str();
}

PropertyResult pass_fail(std::string name, bool pass, std::string detail) {
  return PropertyResult{std::move(name), pass, std::move(detail)};
}

GradedElement guarded_base_point(const TameProblem& problem, Rng& rng, double amplitude,
                                 int max_mode) {
  const SampleOptions options{.max_mode = max_mode, .amplitude = amplitude, .decay = 2.0};
  for (int attempt = 0; attempt < 32; ++attempt) {
    GradedElement x = random_element(problem.spec, rng, options);
    if (problem.domain_guard(x)) return x;
  }
  return GradedElement::zero(problem.spec);
}

}  // namespace

PropertyResult metric_axioms_property(const SpecPtr& spec, std::uint64_t seed, int count) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const GradedElement x = random_element(spec, rng);
    const GradedElement y = random_element(spec, rng);
    const GradedElement z = random_element(spec, rng);

    if (metric(x, x) != 0.0)
      return pass_fail("metric_axioms", false, "metric(x,x) != 0");

    const double xy = metric(x, y);
    const double yx = metric(y, x);
    worst = std::max(worst, std::abs(xy - yx) / (1.0 + xy));

    const double xz = metric(x, z);
    const double yz = metric(y, z);
    if (xz > xy + yz + kRelTol * (1.0 + xz))
      return pass_fail("metric_axioms", false,
                       "triangle violated by " + fmt(xz - xy - yz));

    const double shifted = metric(x + z, y + z);
    worst = std::max(worst, std::abs(shifted - xy) / (1.0 + xy));
  }
  return pass_fail("metric_axioms", worst <= kRelTol,
                   "worst relative deviation " + fmt(worst) + " over " +
                       std::to_string(count) + " triples");
}

PropertyResult nesting_homogeneity_property(const SpecPtr& spec, std::uint64_t seed,
                                            int count) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const GradedElement x = random_element(spec, rng);
    const auto level_norms = norms_upto(x, spec->max_level());
    for (int n = 1; n <= spec->max_level(); ++n)
      if (level_norms[static_cast<std::size_t>(n - 1)] > level_norms[static_cast<std::size_t>(n)])
        return pass_fail("norm_nesting_homogeneity", false,
                         "nesting broken at level " + std::to_string(n));

    const double lambda = 4.0 * rng.symmetric();
    const int n = rng.below(spec->max_level() + 1);
    const double left = norm(lambda * x, n);
    const double right = std::abs(lambda) * level_norms[static_cast<std::size_t>(n)];
    worst = std::max(worst, std::abs(left - right) / (1.0 + right));
  }
  return pass_fail("norm_nesting_homogeneity", worst <= kRelTol,
                   "worst homogeneity deviation " + fmt(worst));
}

PropertyResult convergence_equivalence_property(const SpecPtr& spec, std::uint64_t seed) {
  Rng rng(seed);
  const double slack = metric_truncation_slack(*spec);
  const GradedElement x = random_element(spec, rng);
  const GradedElement direction = random_element(spec, rng);

  // Norm convergence at the top level forces the metric under any target.
  double scale = 1.0;
  double m = metric(x + direction, x);
  for (int k = 0; k < 80 && m >= slack; ++k) {
    scale *= 0.5;
    m = metric(x + scale * direction, x);
  }
  if (m >= slack)
    return pass_fail("metric_convergence_equivalence", false,
                     "metric stuck at " + fmt(m));

  // Conversely a metric below 2^-(N+1) pins every level-n term under its
  // resolvable threshold ||.||_n < 2^(n-N-1) / (1 - 2^(n-N-1)).
  const GradedElement close = x + scale * direction;
  const double observed = metric(close, x);
  const auto diff_norms = norms_upto(close - x, spec->max_level());
  for (int n = 0; n <= spec->max_level(); ++n) {
    const double term_cap = std::ldexp(1.0, n - spec->max_level() - 1);
    const double threshold = term_cap / (1.0 - term_cap);
    if (diff_norms[static_cast<std::size_t>(n)] >= threshold)
      return pass_fail("metric_convergence_equivalence", false,
                       "level " + std::to_string(n) + " above its resolvable threshold");
  }
  return pass_fail("metric_convergence_equivalence", true,
                   "metric floor " + fmt(observed) + " under slack " + fmt(slack));
}

PropertyResult box_recheck_property(const SpecPtr& spec, std::uint64_t seed, int count) {
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    const GradedElement x = random_element(spec, rng);
    std::vector<double> caps(static_cast<std::size_t>(spec->max_level()) + 1);
    for (auto& cap : caps) cap = 4.0 * rng.uniform();
    const BoundSeq s{std::vector<double>(caps)};
    const auto level_norms = norms_upto(x, spec->max_level());
    bool direct = true;
    for (int n = 0; n <= spec->max_level(); ++n)
      if (level_norms[static_cast<std::size_t>(n)] > caps[static_cast<std::size_t>(n)])
        direct = false;
    if (box_contains(x, s, 0.0) != direct)
      return pass_fail("box_norm_recheck", false, "box test disagrees with direct re-check");
  }
  return pass_fail("box_norm_recheck", true, std::to_string(count) + " cases agree");
}

PropertyResult sup_norms_monotone_property(const SpecPtr& spec, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GradedElement> elements;
  for (int k = 0; k < 24; ++k) elements.push_back(random_element(spec, rng));
  const SequenceSource source{
      .generator = [&elements](int k) { return elements[static_cast<std::size_t>(k)]; },
      .declared_bounds = std::nullopt};
  BoundSeq previous = sup_norms(source, 1);
  for (int count = 2; count <= 24; ++count) {
    const BoundSeq current = sup_norms(source, count);
    for (int n = 0; n <= spec->max_level(); ++n)
      if (current[n] < previous[n])
        return pass_fail("sup_norms_monotone", false,
                         "profile shrank at count " + std::to_string(count));
    previous = current;
  }
  return pass_fail("sup_norms_monotone", true, "profiles nondecreasing in count");
}

namespace {

PropertyResult audit_extraction(const std::string& name, const SpecPtr& spec,
                                const SequenceSource& source, double tol, int want,
                                int scan_limit) {
  const ExtractionResult result =
      extract_convergent(source, spec->max_level(), tol, want, scan_limit);
  if (static_cast<int>(result.indices.size()) != want)
    return pass_fail(name, false, "wrong index count");
  for (std::size_t i = 1; i < result.indices.size(); ++i)
    if (result.indices[i] <= result.indices[i - 1])
      return pass_fail(name, false, "indices not strictly increasing");
  double worst = 0.0;
  for (std::size_t i = 0; i < result.indices.size(); ++i)
    for (std::size_t j = i + 1; j < result.indices.size(); ++j) {
      const GradedElement diff =
          source.generator(result.indices[i]) - source.generator(result.indices[j]);
      for (int n = 0; n <= spec->max_level(); ++n)
        worst = std::max(worst, norm(diff, n) - 2.0 * tol);
    }
  return pass_fail(name, worst <= 0.0,
                   "worst pairwise excess over 2*tol: " + fmt(worst));
}

}  // namespace

PropertyResult extraction_alternating_property(const SpecPtr& spec) {
  const SequenceSource source{
      .generator =
          [spec](int k) {
            return GradedElement::mode(spec, 1, 0.0, (k % 2 == 0) ? 1.0 : -1.0);
          },
      .declared_bounds = std::nullopt};
  PropertyResult result = audit_extraction("extraction_alternating", spec, source, 0.1, 4, 16);
  if (result.pass) {
    const auto indices = extract_convergent(source, spec->max_level(), 0.1, 4, 16).indices;
    for (int idx : indices)
      if (idx % 2 != indices.front() % 2)
        return pass_fail("extraction_alternating", false, "mixed parity classes");
  }
  return result;
}

PropertyResult extraction_decay_property(const SpecPtr& spec) {
  const SequenceSource source{
      .generator =
          [spec](int k) { return GradedElement::mode(spec, 1, 0.0, 1.0 / (k + 1)); },
      .declared_bounds = std::nullopt};
  return audit_extraction("extraction_decay", spec, source, 0.1, 4, 64);
}

PropertyResult membership_agreement_property(const SpecPtr& spec, std::uint64_t seed,
                                             int cases) {
  Rng rng(seed);
  const double tol = 1e-9;
  for (int i = 0; i < cases; ++i) {
    std::vector<GradedElement> sample;
    const int size = 3 + rng.below(4);
    for (int j = 0; j < size; ++j) sample.push_back(random_element(spec, rng));
    const bool expect_member = (i % 2 == 0);
    GradedElement x = sample[static_cast<std::size_t>(rng.below(size))];
    if (!expect_member)
      x = x + GradedElement::mode(spec, 1 + rng.below(spec->max_degree()), 1e-3, 0.0);
    if (membership_via_distances(x, sample, tol) != expect_member)
      return pass_fail("membership_agreement", false,
                       "disagreement on case " + std::to_string(i));
  }
  return pass_fail("membership_agreement", true, std::to_string(cases) + " cases agree");
}

PropertyResult fd_ladder_property(const TameProblem& problem, std::uint64_t seed, int pairs) {
  Rng rng(seed);
  const int levels = problem.spec->max_level();
  const double ladder[] = {1e-2, 1e-3, 1e-4};
  double worst_ratio = 0.0;
  for (int i = 0; i < pairs; ++i) {
    // The quotient needs the guard along the whole segment; the guard margin
    // is concave in t, so the endpoints t = 0 and t = max ladder t suffice.
    GradedElement x = GradedElement::zero(problem.spec);
    GradedElement h = x;
    for (int attempt = 0; attempt < 64; ++attempt) {
      x = guarded_base_point(problem, rng, 0.1, problem.spec->max_degree() / 4);
      h = random_element(problem.spec, rng);
      if (problem.domain_guard(x + ladder[0] * h)) break;
      h = GradedElement::zero(problem.spec);
    }
    const GradedElement reference = problem.dderiv(x, h);
    const auto x_norms = norms_upto(x, levels);
    const auto h_norms = norms_upto(h, levels);

    std::vector<std::vector<double>> gaps;
    for (double t : ladder)
      gaps.push_back(norms_upto(directional_derivative_fd(problem, x, h, t) - reference, levels));

    for (std::size_t step = 1; step < gaps.size(); ++step) {
      for (int n = 0; n <= levels; ++n) {
        const double before = gaps[step - 1][static_cast<std::size_t>(n)];
        const double after = gaps[step][static_cast<std::size_t>(n)];
        // Cancellation floor of the difference quotient at this t.
        const double floor =
            1e-12 *
            (1.0 + x_norms[static_cast<std::size_t>(n)] + h_norms[static_cast<std::size_t>(n)]) /
            ladder[step];
        if (after <= floor) continue;
        if (!(after <= before / 8.0))
          return pass_fail(
              "fd_ladder_" + problem.name, false,
              "level " + std::to_string(n) + " pair " + std::to_string(i) + " shrank only " +
                  fmt(before / std::max(after, 1e-300)) + "x");
        worst_ratio = std::max(worst_ratio, after / before);
      }
    }
  }
  return pass_fail("fd_ladder_" + problem.name, true,
                   "max surviving decade ratio " + fmt(worst_ratio) + " (need <= 0.125)");
}

PropertyResult inverse_consistency_property(const TameProblem& problem, std::uint64_t seed,
                                            int draws) {
  Rng rng(seed);
  const int top = problem.top_bound_level();
  const SampleOptions v_options{.max_mode = problem.spec->max_degree() / 2,
                                .amplitude = 1.0,
                                .decay = 0.0};
  double worst = 0.0;
  for (int i = 0; i < draws; ++i) {
    const GradedElement x =
        guarded_base_point(problem, rng, 0.03, std::max(1, problem.spec->max_degree() / 8));
    const GradedElement v = random_element(problem.spec, rng, v_options);
    const GradedElement residual = problem.dderiv(x, problem.right_inverse(x, v)) - v;
    const auto residual_norms = norms_upto(residual, top);
    const auto v_norms = norms_upto(v, top);
    for (int n = 0; n <= top; ++n)
      worst = std::max(worst, residual_norms[static_cast<std::size_t>(n)] /
                                  (1.0 + v_norms[static_cast<std::size_t>(n)]));
  }
  return pass_fail("right_inverse_consistency_" + problem.name, worst <= 1e-8,
                   "worst scaled residual " + fmt(worst) + " (need <= 1e-8)");
}

PropertyResult inclusion_property(const TameProblem& problem, std::uint64_t seed, int samples,
                                  int base_points, double slack) {
  Rng rng(seed);
  const int levels = problem.spec->max_level();
  std::vector<double> caps(static_cast<std::size_t>(levels) + 1);
  for (int n = 0; n <= levels; ++n) caps[static_cast<std::size_t>(n)] = std::ldexp(1.0, n);
  const BoundSeq s{std::move(caps)};
  for (int b = 0; b < base_points; ++b) {
    const GradedElement x =
        guarded_base_point(problem, rng, 0.1, std::max(1, problem.spec->max_degree() / 4));
    if (!sampled_box_inclusion(problem, x, s, samples, slack, rng))
      return pass_fail("box_inclusion_" + problem.name, false,
                       "inclusion failed at base point " + std::to_string(b));
  }
  return pass_fail("box_inclusion_" + problem.name, true,
                   std::to_string(samples) + " samples x " + std::to_string(base_points) +
                       " base points in the box");
}

PropertyResult zero_fixed_point_property(const TameProblem& problem) {
  const auto norms = norms_upto(problem.eval(GradedElement::zero(problem.spec)),
                                problem.spec->max_level());
  double worst = 0.0;
  for (double v : norms) worst = std::max(worst, v);
  return pass_fail("zero_fixed_point_" + problem.name, worst <= 1e-12,
                   "||f(0)||_N = " + fmt(worst));
}

PropertyResult trace_audit_property(const std::string& name, const SolveOutcome& outcome,
                                    double eps) {
  const auto& records = outcome.trace.records;
  if (records.empty()) return pass_fail("trace_audit_" + name, false, "empty trace");
  double prev_t = -1.0;
  double prev_rejected_r = std::numeric_limits<double>::infinity();
  for (const StepRecord& rec : records) {
    if (rec.accepted) {
      if (rec.t_before <= prev_t && prev_t >= 0.0)
        return pass_fail("trace_audit_" + name, false, "t not strictly increasing");
      prev_t = rec.t_before;
      prev_rejected_r = std::numeric_limits<double>::infinity();
      for (std::size_t n = 0; n < rec.defect.size(); ++n)
        if (!(rec.defect[n] <= rec.r * eps))
          return pass_fail("trace_audit_" + name, false,
                           "accepted defect above r*eps at level " + std::to_string(n));
      const double t_after = rec.t_before + rec.r;
      for (std::size_t n = 0; n < rec.residual.size(); ++n)
        if (!(rec.residual[n] <= t_after * eps + 1e-12))
          return pass_fail("trace_audit_" + name, false,
                           "residual above t*eps + 1e-12 at level " + std::to_string(n));
    } else {
      if (!(rec.r < prev_rejected_r))
        return pass_fail("trace_audit_" + name, false, "rejected r not strictly decreasing");
      prev_rejected_r = rec.r;
    }
  }
  return pass_fail("trace_audit_" + name, true,
                   std::to_string(records.size()) + " records audited");
}

PropertyResult box_invariant_property(const std::string& name, const SolveOutcome& outcome) {
  for (const StepRecord& rec : outcome.trace.records) {
    if (!rec.accepted) continue;
    for (std::size_t n = 0; n < rec.state_norm.size(); ++n) {
      if (std::isinf(rec.bound[n])) continue;
      if (rec.state_norm[n] > rec.bound[n] * (1.0 + 1e-9))
        return pass_fail("box_invariant_" + name, false,
                         "state left its t-scaled box at level " + std::to_string(n));
    }
  }
  return pass_fail("box_invariant_" + name, true, "x(t) inside t-scaled boxes throughout");
}

PropertyResult oracle_equivalence_property(const TameProblem& problem, const GradedElement& y,
                                           double eps, double tol) {
  ContinuationConfig config;
  config.eps = eps;
  config.monitored_levels = 0;
  const SolveOutcome outcome = solve(problem, y, config);
  if (!outcome.success())
    return pass_fail("oracle_equivalence_" + problem.name, false,
                     "solve failed: " + to_string(outcome.status));
  const GradedElement newton = dense_newton_oracle(problem, y, tol, 50);
  const double gap = norm(outcome.x_final - newton, 0);
  const double allowed = 10.0 * std::max(eps, tol);
  return pass_fail("oracle_equivalence_" + problem.name, gap <= allowed,
                   "||x_solve - x_newton||_0 = " + fmt(gap) + " vs " + fmt(allowed));
}

PropertyResult determinism_property(const TameProblem& problem, const GradedElement& y,
                                    const ContinuationConfig& config) {
  const auto csv_of = [&] {
    const SolveOutcome outcome = solve(problem, y, config);
    std::ostringstream out;
    outcome.trace.write_csv(out);
    return out.str();
  };
  const std::string first = csv_of();
  const std::string second = csv_of();
  return pass_fail("determinism_" + problem.name, first == second,
                   first == second ? "byte-identical traces" : "traces differ");
}

std::vector<PropertyResult> run_all_properties(std::uint64_t seed) {
  std::vector<PropertyResult> results;
  Rng seeds(seed);

  const SpecPtr small = make_spec(8, 4);
  results.push_back(metric_axioms_property(small, seeds.next(), 1000));
  results.push_back(nesting_homogeneity_property(small, seeds.next(), 1000));
  results.push_back(convergence_equivalence_property(small, seeds.next()));
  results.push_back(box_recheck_property(small, seeds.next(), 200));
  results.push_back(sup_norms_monotone_property(small, seeds.next()));
  results.push_back(extraction_alternating_property(small));
  results.push_back(extraction_decay_property(small));
  results.push_back(membership_agreement_property(small, seeds.next(), 100));

  const SpecPtr desk = make_spec(16, 4);
  const std::vector<TameProblem> catalog = {
      make_identity_problem(desk), make_quadratic_problem(desk, 1.0),
      make_smoothing_problem(desk), make_nonlinear_smoothing_problem(desk, 0.5)};
  for (const TameProblem& problem : catalog) {
    results.push_back(zero_fixed_point_property(problem));
    results.push_back(fd_ladder_property(problem, seeds.next(), 50));
    results.push_back(inverse_consistency_property(problem, seeds.next(), 100));
    results.push_back(inclusion_property(problem, seeds.next(), 100, 3, 1e-6));
  }

  {
    Rng rng(seeds.next());
    const GradedElement y_flat = random_element(desk, rng);
    ContinuationConfig config;
    config.eps = 1e-8;

    const TameProblem& identity = catalog[0];
    const SolveOutcome id_run = solve(identity, y_flat, config);
    results.push_back(trace_audit_property("identity", id_run, config.eps));
    results.push_back(box_invariant_property("identity", id_run));

    const TameProblem& smoothing = catalog[2];
    const SolveOutcome smooth_run = solve(smoothing, y_flat, config);
    results.push_back(trace_audit_property("smoothing", smooth_run, config.eps));
    results.push_back(box_invariant_property("smoothing", smooth_run));
    results.push_back(determinism_property(smoothing, y_flat, config));

    const GradedElement y_small = GradedElement::mode(desk, 1, 0.0, 0.1);
    ContinuationConfig quad_config;
    quad_config.eps = 1e-5;
    quad_config.monitored_levels = 1;
    const TameProblem& quadratic = catalog[1];
    results.push_back(
        trace_audit_property("quadratic", solve(quadratic, y_small, quad_config), quad_config.eps));

    results.push_back(oracle_equivalence_property(identity, y_flat, 1e-6, 1e-8));
    results.push_back(oracle_equivalence_property(quadratic, y_small, 1e-6, 1e-8));
    results.push_back(oracle_equivalence_property(smoothing, y_flat, 1e-6, 1e-8));
    results.push_back(oracle_equivalence_property(catalog[3], y_small, 1e-6, 1e-8));
  }

  return results;
}

}  // namespace nme
