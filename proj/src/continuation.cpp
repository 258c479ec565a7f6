#include "nme/continuation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace nme {

int ContinuationConfig::resolved_levels(const GradingSpec& spec) const {
  return monitored_levels < 0 ? spec.max_level() : monitored_levels;
}

void ContinuationConfig::validate(const GradingSpec& spec) const {
  if (!(eps > 0.0)) throw config_error("continuation: eps must be > 0");
  if (!(r_min < r0 && r0 <= 1.0)) throw config_error("continuation: need r_min < r0 <= 1");
  if (!(r_min > 0.0)) throw config_error("continuation: r_min must be > 0");
  if (growth < 1.0) throw config_error("continuation: growth must be >= 1");
  if (max_steps < 1) throw config_error("continuation: max_steps must be >= 1");
  const int nm = resolved_levels(spec);
  if (nm < 0 || nm > spec.max_level())
    throw config_error("continuation: monitored levels outside 0..N");
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::success: return "Success";
    case SolveStatus::step_underflow: return "StepUnderflow";
    case SolveStatus::guard_exit: return "GuardExit";
    case SolveStatus::max_steps_exceeded: return "MaxSteps";
    case SolveStatus::tame_violation: return "TameViolation";
  }
  return "Unknown";
}

bool SolveOutcome::residual_ok() const {
  if (status != SolveStatus::success) return false;
  for (bool ok : residual_certified)
    if (!ok) return false;
  return true;
}

StepCheck step_acceptable(const TameProblem& problem, const GradedElement& x,
                          const GradedElement& h, const GradedElement& y, double r,
                          double eps, int levels) {
  if (!problem.domain_guard(x)) throw guard_error(problem.name + ": base point off guard");
  StepCheck check{.accepted = false,
                  .cause = RejectCause::none,
                  .defect = {},
                  .f_trial = GradedElement::zero(problem.spec)};
  const GradedElement trial = x + r * h;
  if (!problem.domain_guard(trial)) {
    check.cause = RejectCause::guard;
    check.defect.assign(static_cast<std::size_t>(levels) + 1,
                        std::numeric_limits<double>::quiet_NaN());
    return check;
  }
  check.f_trial = problem.eval(trial);
  const GradedElement defect_el = check.f_trial - problem.eval(x) - r * y;
  check.defect = norms_upto(defect_el, levels);
  check.accepted = true;
  for (double dn : check.defect)
    if (!(dn <= r * eps)) check.accepted = false;
  if (!check.accepted) check.cause = RejectCause::defect;
  return check;
}

namespace {

struct StateSnapshot {
  std::vector<double> residual;
  std::vector<double> state_norm;
  std::vector<double> bound;
  bool box_ok = true;
};

StateSnapshot snapshot_state(const GradedElement& x, const GradedElement& fx,
                             const GradedElement& y, double t,
                             std::span<const double> y_shifted_bounds, int levels,
                             double tame_slack) {
  StateSnapshot snap;
  snap.residual = norms_upto(fx - t * y, levels);
  snap.state_norm = norms_upto(x, levels);
  snap.bound.resize(static_cast<std::size_t>(levels) + 1);
  for (int n = 0; n <= levels; ++n) {
    const double base = y_shifted_bounds[static_cast<std::size_t>(n)];
    const double bound = std::isinf(base) ? base : t * base;
    snap.bound[static_cast<std::size_t>(n)] = bound;
    if (!std::isinf(bound) &&
        snap.state_norm[static_cast<std::size_t>(n)] > bound * (1.0 + tame_slack))
      snap.box_ok = false;
  }
  return snap;
}

}  // namespace

SolveOutcome solve(const TameProblem& problem, const GradedElement& y,
                   const ContinuationConfig& config) {
  const GradingSpec& spec = *problem.spec;
  config.validate(spec);
  if (!same_grading(spec, *y.spec()))
    throw spec_mismatch_error("target built on a different grading");

  const int levels = config.resolved_levels(spec);
  const int d = problem.derivative_loss;
  const int top_bound = problem.top_bound_level();
  const auto y_norms = norms_upto(y, spec.max_level());

  // Per-level cap c_n ||y||_{n+d} of the proof's h-box; unbounded above N-d.
  std::vector<double> h_box(static_cast<std::size_t>(levels) + 1, BoundSeq::unbounded());
  for (int n = 0; n <= std::min(levels, top_bound); ++n)
    h_box[static_cast<std::size_t>(n)] = problem.c[n] * y_norms[static_cast<std::size_t>(n + d)];

  SolveOutcome outcome{.status = SolveStatus::success,
                       .x_final = GradedElement::zero(problem.spec),
                       .t_final = 0.0,
                       .trace = {},
                       .residual_certified = {},
                       .bound_certified = {},
                       .message = ""};
  outcome.trace.monitored_levels = levels;

  GradedElement x = GradedElement::zero(problem.spec);
  GradedElement fx = problem.eval(x);
  double t = 0.0;
  double r_trial = config.r0;
  int attempts = 0;

  const auto finish = [&](SolveStatus status, std::string message) {
    outcome.status = status;
    outcome.x_final = x;
    outcome.t_final = t;
    outcome.message = std::move(message);
    const StateSnapshot snap = snapshot_state(x, fx, y, t, h_box, levels, config.tame_slack);
    outcome.residual_certified.resize(static_cast<std::size_t>(levels) + 1, false);
    outcome.bound_certified.resize(static_cast<std::size_t>(levels) + 1, false);
    for (int n = 0; n <= levels; ++n) {
      outcome.residual_certified[static_cast<std::size_t>(n)] =
          status == SolveStatus::success &&
          snap.residual[static_cast<std::size_t>(n)] <= config.eps * (1.0 + 1e-9);
      const double cap = h_box[static_cast<std::size_t>(n)];
      outcome.bound_certified[static_cast<std::size_t>(n)] =
          status == SolveStatus::success &&
          (std::isinf(cap) || snap.state_norm[static_cast<std::size_t>(n)] <=
                                  cap * (1.0 + config.bound_slack));
    }
    return outcome;
  };

  while (t < 1.0) {
    if (!problem.domain_guard(x))
      return finish(SolveStatus::guard_exit, "guard failed at the accepted state");

    const GradedElement h = problem.right_inverse(x, y);
    const auto h_norms = norms_upto(h, levels);
    bool h_box_ok = true;
    for (int n = 0; n <= levels; ++n) {
      const double cap = h_box[static_cast<std::size_t>(n)];
      if (!std::isinf(cap) &&
          h_norms[static_cast<std::size_t>(n)] > cap * (1.0 + config.tame_slack))
        h_box_ok = false;
    }
    if (!h_box_ok && config.enforce_tame)
      return finish(SolveStatus::tame_violation,
                    "right-inverse step h left its tame box; the advertised c is broken");

    // State at t is unchanged across a halving chain; snapshot it once.
    const StateSnapshot at_t = snapshot_state(x, fx, y, t, h_box, levels, config.tame_slack);

    double r = std::min(r_trial, 1.0 - t);
    while (true) {
      if (++attempts > config.max_steps)
        return finish(SolveStatus::max_steps_exceeded, "attempt budget exhausted");

      StepCheck check = step_acceptable(problem, x, h, y, r, config.eps, levels);
      StepRecord record{.t_before = t,
                        .r = r,
                        .accepted = check.accepted,
                        .cause = check.cause,
                        .defect = std::move(check.defect),
                        .residual = {},
                        .state_norm = {},
                        .bound = {},
                        .box_ok = true};
      if (check.accepted) {
        x = x + r * h;
        fx = std::move(check.f_trial);
        t += r;
        r_trial = std::min(r * config.growth, 1.0);
        StateSnapshot snap = snapshot_state(x, fx, y, t, h_box, levels, config.tame_slack);
        record.residual = std::move(snap.residual);
        record.state_norm = std::move(snap.state_norm);
        record.bound = std::move(snap.bound);
        record.box_ok = snap.box_ok;
        outcome.trace.records.push_back(std::move(record));
        break;
      }

      const RejectCause cause = check.cause;
      record.residual = at_t.residual;
      record.state_norm = at_t.state_norm;
      record.bound = at_t.bound;
      record.box_ok = at_t.box_ok;
      outcome.trace.records.push_back(std::move(record));

      r *= 0.5;
      if (r < config.r_min) {
        if (cause == RejectCause::guard)
          return finish(SolveStatus::guard_exit,
                        "step halving hit r_min against the guard boundary");
        return finish(SolveStatus::step_underflow,
                      "step halving hit r_min; the local step inequality is unattainable "
                      "at eps=" + std::to_string(config.eps));
      }
    }
  }

  return finish(SolveStatus::success, "");
}

void ContinuationTrace::write_csv(std::ostream& out) const {
  const int levels = monitored_levels;
  out << "t,r,accepted";
  for (int n = 0; n <= levels; ++n) out << ",defect_" << n;
  for (int n = 0; n <= levels; ++n) out << ",resid_" << n;
  for (int n = 0; n <= levels; ++n) out << ",norm_" << n;
  for (int n = 0; n <= levels; ++n) out << ",bound_" << n;
  out << "\n";
  char buf[40];
  const auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << ',' << buf;
  };
  for (const StepRecord& rec : records) {
    std::snprintf(buf, sizeof buf, "%.17g", rec.t_before);
    out << buf;
    put(rec.r);
    out << ',' << (rec.accepted ? 1 : 0);
    for (double v : rec.defect) put(v);
    for (double v : rec.residual) put(v);
    for (double v : rec.state_norm) put(v);
    for (double v : rec.bound) put(v);
    out << "\n";
  }
}

BoundReport verify_theorem_bounds(const SolveOutcome& outcome, const TameProblem& problem,
                                  const GradedElement& y, double slack, double eps) {
  const int levels = problem.spec->max_level();
  const int d = problem.derivative_loss;
  const int top = problem.top_bound_level();

  BoundReport report;
  report.pass = outcome.success();

  const auto x_norms = norms_upto(outcome.x_final, levels);
  const auto y_norms = norms_upto(y, levels);
  report.ratio.resize(static_cast<std::size_t>(top) + 1, 0.0);
  report.bound_pass.resize(static_cast<std::size_t>(top) + 1, false);
  for (int n = 0; n <= top; ++n) {
    const double cap = problem.c[n] * y_norms[static_cast<std::size_t>(n + d)];
    const double xn = x_norms[static_cast<std::size_t>(n)];
    const bool ok = xn <= cap * (1.0 + slack);
    report.bound_pass[static_cast<std::size_t>(n)] = ok;
    report.ratio[static_cast<std::size_t>(n)] =
        cap > 0.0 ? xn / cap
                  : (xn > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    if (!ok) report.pass = false;
  }

  const GradedElement fx[] = {problem.eval(outcome.x_final)};
  report.residual_recheck.resize(static_cast<std::size_t>(levels) + 1, 0.0);
  report.residual_pass.resize(static_cast<std::size_t>(levels) + 1, false);
  for (int n = 0; n <= levels; ++n) {
    const double dist = distance_at_level(y, fx, n);
    report.residual_recheck[static_cast<std::size_t>(n)] = dist;
    const bool ok = dist <= eps * (1.0 + 1e-9);
    report.residual_pass[static_cast<std::size_t>(n)] = ok;
    if (n <= outcome.trace.monitored_levels && !ok) report.pass = false;
  }
  return report;
}

GradedElement dense_newton_oracle(const TameProblem& problem, const GradedElement& y,
                                  double tol, int max_iter) {
  const SpecPtr& spec = problem.spec;
  const int dim = spec->coeff_count();
  const int degree = spec->max_degree();

  const auto pack = [&](const GradedElement& el) {
    Eigen::VectorXd z(dim);
    for (int k = 0; k <= degree; ++k) z(k) = el.cos_coeff(k);
    for (int k = 1; k <= degree; ++k) z(degree + k) = el.sin_coeff(k);
    return z;
  };
  const auto unpack = [&](const Eigen::VectorXd& z) {
    std::vector<double> a(static_cast<std::size_t>(degree) + 1);
    std::vector<double> b(static_cast<std::size_t>(degree));
    for (int k = 0; k <= degree; ++k) a[static_cast<std::size_t>(k)] = z(k);
    for (int k = 1; k <= degree; ++k) b[static_cast<std::size_t>(k - 1)] = z(degree + k);
    return GradedElement::from_coeffs(spec, std::move(a), std::move(b));
  };
  const auto basis = [&](int i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    e(i) = 1.0;
    return unpack(e);
  };

  GradedElement x = GradedElement::zero(spec);
  for (int iter = 0; iter < max_iter; ++iter) {
    const GradedElement residual = problem.eval(x) - y;
    if (norm(residual, 0) <= tol) return x;

    Eigen::MatrixXd jac(dim, dim);
    for (int i = 0; i < dim; ++i) jac.col(i) = pack(problem.dderiv(x, basis(i)));
    const Eigen::VectorXd rhs = -pack(residual);
    const Eigen::VectorXd dz = jac.partialPivLu().solve(rhs);

    const double r0 = rhs.norm();
    double step = 1.0;
    GradedElement candidate = x + unpack(dz);
    while (step > 1e-4 &&
           pack(problem.eval(candidate) - y).norm() > (1.0 - 0.25 * step) * r0) {
      step *= 0.5;
      candidate = x + step * unpack(dz);
    }
    x = std::move(candidate);
  }
  if (norm(problem.eval(x) - y, 0) <= tol) return x;
  throw newton_divergence_error(problem.name + ": dense Newton did not reach tol=" +
                                std::to_string(tol));
}

}  // namespace nme
