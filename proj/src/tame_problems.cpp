#include "nme/tame_problems.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace nme {

namespace {

constexpr double kGuardFloor = 0.5;
constexpr double kEstimateMargin = 0.1;

GradedElement apply_mode_multiplier(const GradedElement& x,
                                    const std::function<double(int)>& factor) {
  const SpecPtr& spec = x.spec();
  std::vector<double> a(static_cast<std::size_t>(spec->max_degree()) + 1);
  std::vector<double> b(static_cast<std::size_t>(spec->max_degree()));
  a[0] = factor(0) * x.cos_coeff(0);
  for (int k = 1; k <= spec->max_degree(); ++k) {
    const double f = factor(k);
    a[static_cast<std::size_t>(k)] = f * x.cos_coeff(k);
    b[static_cast<std::size_t>(k - 1)] = f * x.sin_coeff(k);
  }
  return GradedElement::from_coeffs(spec, std::move(a), std::move(b));
}

GradedElement smooth(const GradedElement& x) {
  return apply_mode_multiplier(x, [](int k) { return 1.0 / (1.0 + k); });
}

GradedElement unsmooth(const GradedElement& x) {
  return apply_mode_multiplier(x, [](int k) { return 1.0 + k; });
}

/// Pointwise square on the grid, projected back to degree K. Exact: the
/// product has degree 2K and the grid carries q(2K+1) >= 8K+4 points.
GradedElement projected_square(const GradedElement& x) {
  std::vector<double> g = grid_values(x);
  for (double& v : g) v *= v;
  return element_from_grid(x.spec(), g);
}

GradedElement projected_product(const GradedElement& x, const GradedElement& y) {
  std::vector<double> gx = grid_values(x);
  const std::vector<double> gy = grid_values(y);
  for (std::size_t i = 0; i < gx.size(); ++i) gx[i] *= gy[i];
  return element_from_grid(x.spec(), gx);
}

/// v / (1 + 2 mu x) on the grid, projected. Throws when the denominator
/// dips under the guard floor.
GradedElement projected_quotient(const GradedElement& v, const GradedElement& x, double mu) {
  std::vector<double> gx = grid_values(x);
  const std::vector<double> gv = grid_values(v);
  for (std::size_t i = 0; i < gx.size(); ++i) {
    const double denom = 1.0 + 2.0 * mu * gx[i];
    if (denom < kGuardFloor)
      throw guard_error("right inverse evaluated outside the guard region");
    gx[i] = gv[i] / denom;
  }
  return element_from_grid(v.spec(), gx);
}

}  // namespace

void validate_problem(const TameProblem& problem) {
  const int levels = problem.spec->max_level();
  if (problem.derivative_loss < 0 || problem.derivative_loss > levels)
    throw config_error(problem.name + ": derivative loss d outside 0..N");
  if (problem.c.size() != levels + 1)
    throw config_error(problem.name + ": c must have N+1 entries");
  for (int n = 0; n <= levels; ++n)
    if (!(problem.c[n] > 0.0))
      throw config_error(problem.name + ": tame constants must be positive");
  const GradedElement zero = GradedElement::zero(problem.spec);
  const auto f0 = norms_upto(problem.eval(zero), levels);
  for (double v : f0)
    if (v > 1e-12) throw config_error(problem.name + ": f(0) != 0");
}

// Catalog ---------------------------------------------------------------------

TameProblem make_identity_problem(SpecPtr spec) {
  TameProblem p;
  p.spec = spec;
  p.name = "identity";
  p.eval = [](const GradedElement& x) { return x; };
  p.dderiv = [](const GradedElement&, const GradedElement& h) { return h; };
  p.right_inverse = [](const GradedElement&, const GradedElement& v) { return v; };
  p.domain_guard = [](const GradedElement&) { return true; };
  p.c = BoundSeq::constant(spec->max_level() + 1, 1.0);
  p.derivative_loss = 0;
  p.c_provenance = "analytic";
  validate_problem(p);
  return p;
}

TameProblem make_quadratic_problem(SpecPtr spec, double mu) {
  TameProblem p;
  p.spec = spec;
  p.name = "quadratic";
  p.eval = [mu](const GradedElement& x) { return x + mu * projected_square(x); };
  p.dderiv = [mu](const GradedElement& x, const GradedElement& h) {
    return h + (2.0 * mu) * projected_product(x, h);
  };
  p.right_inverse = [mu](const GradedElement& x, const GradedElement& v) {
    return projected_quotient(v, x, mu);
  };
  p.domain_guard = [mu](const GradedElement& x) {
    const std::vector<double> g = grid_values(x);
    double m = 1.0 + 2.0 * mu * g.front();
    for (double v : g) m = std::min(m, 1.0 + 2.0 * mu * v);
    return m >= kGuardFloor;
  };
  p.c = BoundSeq::constant(spec->max_level() + 1, 1.0);
  p.derivative_loss = 0;
  validate_problem(p);
  p.c = estimate_constants(p, 400, 0x71a9d2c3b5e40f17ULL);
  p.c_provenance = "estimated";
  return p;
}

TameProblem make_smoothing_problem(SpecPtr spec) {
  TameProblem p;
  p.spec = spec;
  p.name = "smoothing";
  p.eval = [](const GradedElement& x) { return smooth(x); };
  p.dderiv = [](const GradedElement&, const GradedElement& h) { return smooth(h); };
  p.right_inverse = [](const GradedElement&, const GradedElement& v) { return unsmooth(v); };
  p.domain_guard = [](const GradedElement&) { return true; };
  p.c = BoundSeq::constant(spec->max_level() + 1, 2.0);
  p.derivative_loss = 1;
  p.c_provenance = "analytic";
  validate_problem(p);
  return p;
}

TameProblem make_nonlinear_smoothing_problem(SpecPtr spec, double mu) {
  TameProblem p;
  p.spec = spec;
  p.name = "nonlinear_smoothing";
  p.eval = [mu](const GradedElement& x) {
    const GradedElement sx = smooth(x);
    return sx + mu * projected_square(sx);
  };
  p.dderiv = [mu](const GradedElement& x, const GradedElement& h) {
    const GradedElement sh = smooth(h);
    return sh + (2.0 * mu) * projected_product(smooth(x), sh);
  };
  p.right_inverse = [mu](const GradedElement& x, const GradedElement& v) {
    return unsmooth(projected_quotient(v, smooth(x), mu));
  };
  p.domain_guard = [mu](const GradedElement& x) {
    const std::vector<double> g = grid_values(smooth(x));
    double m = 1.0 + 2.0 * mu * g.front();
    for (double v : g) m = std::min(m, 1.0 + 2.0 * mu * v);
    return m >= kGuardFloor;
  };
  p.c = BoundSeq::constant(spec->max_level() + 1, 1.0);
  p.derivative_loss = 1;
  validate_problem(p);
  p.c = estimate_constants(p, 400, 0x3c6ef372fe94f82aULL);
  p.c_provenance = "estimated";
  return p;
}

// Operations ------------------------------------------------------------------

GradedElement directional_derivative_fd(const TameProblem& problem, const GradedElement& x,
                                        const GradedElement& h, double t) {
  if (t <= 0.0) throw config_error("difference quotient needs t > 0");
  if (!problem.domain_guard(x)) throw guard_error(problem.name + ": base point off guard");
  const GradedElement shifted = x + t * h;
  if (!problem.domain_guard(shifted))
    throw guard_error(problem.name + ": x + t h off guard");
  return (1.0 / t) * (problem.eval(shifted) - problem.eval(x));
}

TameCheckReport check_tame_at(const TameProblem& problem, const GradedElement& x,
                              const GradedElement& v, double slack, double residual_tol) {
  if (!problem.domain_guard(x)) throw guard_error(problem.name + ": base point off guard");
  const int levels = problem.spec->max_level();
  const int top = problem.top_bound_level();

  const GradedElement u = problem.right_inverse(x, v);
  const auto residual_norms = norms_upto(problem.dderiv(x, u) - v, levels);
  const auto u_norms = norms_upto(u, levels);
  const auto v_norms = norms_upto(v, levels);

  TameCheckReport report;
  report.inverse_residual = residual_norms;
  report.bound_ratio.resize(static_cast<std::size_t>(levels) + 1, 0.0);
  report.level_exempt.resize(static_cast<std::size_t>(levels) + 1, false);
  report.pass = true;
  for (int n = 0; n <= levels; ++n) {
    if (residual_norms[static_cast<std::size_t>(n)] >
        residual_tol * (1.0 + v_norms[static_cast<std::size_t>(n)]))
      report.pass = false;
    if (n > top) {
      report.level_exempt[static_cast<std::size_t>(n)] = true;
      continue;
    }
    const double denom =
        problem.c[n] * v_norms[static_cast<std::size_t>(n + problem.derivative_loss)];
    const double num = u_norms[static_cast<std::size_t>(n)];
    double ratio = 0.0;
    if (denom > 0.0)
      ratio = num / denom;
    else if (num > 0.0)
      ratio = std::numeric_limits<double>::infinity();
    report.bound_ratio[static_cast<std::size_t>(n)] = ratio;
    if (ratio > 1.0 + slack) report.pass = false;
  }
  return report;
}

bool sampled_box_inclusion(const TameProblem& problem, const GradedElement& x,
                           const BoundSeq& s, int samples, double slack, Rng& rng) {
  if (samples < 1) throw config_error("sampled_box_inclusion needs samples >= 1");
  if (!problem.domain_guard(x)) throw guard_error(problem.name + ": base point off guard");
  const int levels = problem.spec->max_level();
  if (s.size() != levels + 1)
    throw length_mismatch_error("box sequence must have N+1 entries");
  const int d = problem.derivative_loss;
  const int top = problem.top_bound_level();

  // Target box for u: s at the bounded levels, unbounded above N-d where the
  // tame estimate cannot see past the truncation.
  std::vector<double> u_box(static_cast<std::size_t>(levels) + 1, BoundSeq::unbounded());
  for (int n = 0; n <= top; ++n) u_box[static_cast<std::size_t>(n)] = s[n];
  const BoundSeq u_bounds{std::move(u_box)};

  for (int i = 0; i < samples; ++i) {
    // Rejection step: a zero draw cannot be rescaled onto the box boundary.
    GradedElement w = GradedElement::zero(problem.spec);
    bool nondegenerate = false;
    for (int attempt = 0; attempt < 64 && !nondegenerate; ++attempt) {
      w = random_element(problem.spec, rng);
      nondegenerate = norm(w, 0) > 0.0;
    }
    if (!nondegenerate) throw sampler_error("could not draw a nonzero box sample");

    const auto w_norms = norms_upto(w, levels);
    double scale = std::numeric_limits<double>::infinity();
    for (int n = 0; n <= top; ++n) {
      if (s.is_unbounded(n)) continue;
      const double cap = s[n] / problem.c[n];
      const double wn = w_norms[static_cast<std::size_t>(n + d)];
      if (cap == 0.0)
        scale = 0.0;
      else if (wn > 0.0)
        scale = std::min(scale, cap / wn);
    }
    if (std::isinf(scale)) scale = 1.0;  // box unbounded at every checked level

    const GradedElement v = scale * w;
    const GradedElement u = problem.right_inverse(x, v);
    if (!box_contains(u, u_bounds, slack)) return false;
  }
  return true;
}

namespace {

/// Largest scaling of `direction` that stays inside the guard, by bisection;
/// the estimator uses such near-boundary states so the constants cover the
/// whole guarded domain, not just a small ball around 0.
GradedElement guard_edge_point(const TameProblem& problem, const GradedElement& direction,
                               double backoff) {
  double lo = 0.0;
  double hi = 8.0;
  if (problem.domain_guard(hi * direction)) return hi * direction;
  for (int iter = 0; iter < 40; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (problem.domain_guard(mid * direction))
      lo = mid;
    else
      hi = mid;
  }
  return (backoff * lo) * direction;
}

}  // namespace

BoundSeq estimate_constants(const TameProblem& problem, int trials, std::uint64_t seed,
                            int levels_wanted) {
  if (trials < 100) throw config_error("estimate_constants needs trials >= 100");
  const int levels = problem.spec->max_level();
  const int d = problem.derivative_loss;
  const int top = levels_wanted < 0 ? problem.top_bound_level()
                                    : std::min(levels_wanted, problem.top_bound_level());
  if (top < 0) throw config_error("estimate_constants: no level admits the tame pairing");
  Rng rng(seed);

  const SampleOptions base_options{.max_mode = std::max(1, problem.spec->max_degree() / 4),
                                   .amplitude = 0.1,
                                   .decay = 2.0};
  const SampleOptions edge_options{.max_mode = std::max(1, problem.spec->max_degree() / 4),
                                   .amplitude = 1.0,
                                   .decay = 2.0};

  std::vector<double> best(static_cast<std::size_t>(top) + 1, 0.0);
  std::vector<int> usable(static_cast<std::size_t>(top) + 1, 0);
  for (int trial = 0; trial < trials; ++trial) {
    GradedElement x = GradedElement::zero(problem.spec);
    if (trial % 2 == 0) {
      for (int attempt = 0; attempt < 16; ++attempt) {
        GradedElement candidate = random_element(problem.spec, rng, base_options);
        if (problem.domain_guard(candidate)) {
          x = std::move(candidate);
          break;
        }
      }
    } else {
      x = guard_edge_point(problem, random_element(problem.spec, rng, edge_options), 0.95);
    }
    const GradedElement v = (trial % 4 == 0) ? random_single_mode(problem.spec, rng)
                                             : random_element(problem.spec, rng);
    const auto v_norms = norms_upto(v, levels);
    const auto u_norms = norms_upto(problem.right_inverse(x, v), levels);
    for (int n = 0; n <= top; ++n) {
      const double denom = v_norms[static_cast<std::size_t>(n + d)];
      if (denom > 1e-300) {
        best[static_cast<std::size_t>(n)] =
            std::max(best[static_cast<std::size_t>(n)], u_norms[static_cast<std::size_t>(n)] / denom);
        ++usable[static_cast<std::size_t>(n)];
      }
    }
  }

  std::vector<double> c(static_cast<std::size_t>(levels) + 1, 0.0);
  for (int n = 0; n <= top; ++n) {
    if (usable[static_cast<std::size_t>(n)] == 0 || best[static_cast<std::size_t>(n)] <= 0.0)
      throw estimation_error(problem.name + ": degenerate sampling at level " +
                             std::to_string(n));
    c[static_cast<std::size_t>(n)] = (1.0 + kEstimateMargin) * best[static_cast<std::size_t>(n)];
  }
  for (int n = top + 1; n <= levels; ++n)
    c[static_cast<std::size_t>(n)] = c[static_cast<std::size_t>(top)];
  return BoundSeq(std::move(c));
}

}  // namespace nme
