#include "nme/graded_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace nme {

GradingSpec::GradingSpec(int max_degree, int max_level, int oversampling)
    : degree_(max_degree),
      max_level_(max_level),
      oversample_(oversampling),
      grid_(oversampling * (2 * max_degree + 1)) {
  if (max_degree < 1) throw config_error("GradingSpec: max degree K must be >= 1");
  if (max_level < 0) throw config_error("GradingSpec: max level N must be >= 0");
  if (oversampling < 4) throw config_error("GradingSpec: oversampling q must be >= 4");

  cos_table_.resize(static_cast<std::size_t>(degree_) + 1);
  sin_table_.resize(static_cast<std::size_t>(degree_) + 1);
  for (int k = 0; k <= degree_; ++k) {
    auto& ck = cos_table_[static_cast<std::size_t>(k)];
    auto& sk = sin_table_[static_cast<std::size_t>(k)];
    ck.resize(static_cast<std::size_t>(grid_));
    sk.resize(static_cast<std::size_t>(grid_));
    for (int i = 0; i < grid_; ++i) {
      const double angle = k * grid_point(i);
      ck[static_cast<std::size_t>(i)] = std::cos(angle);
      sk[static_cast<std::size_t>(i)] = std::sin(angle);
    }
  }
}

double GradingSpec::grid_point(int i) const {
  return 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(grid_);
}

std::span<const double> GradingSpec::cos_row(int k) const {
  return cos_table_[static_cast<std::size_t>(k)];
}

std::span<const double> GradingSpec::sin_row(int k) const {
  return sin_table_[static_cast<std::size_t>(k)];
}

SpecPtr make_spec(int max_degree, int max_level, int oversampling) {
  return std::make_shared<const GradingSpec>(max_degree, max_level, oversampling);
}

bool same_grading(const GradingSpec& a, const GradingSpec& b) noexcept {
  return a.max_degree() == b.max_degree() && a.max_level() == b.max_level() &&
         a.oversampling() == b.oversampling();
}

namespace detail {

void require_same_grading(const GradedElement& a, const GradedElement& b) {
  if (!same_grading(*a.spec(), *b.spec()))
    throw spec_mismatch_error("elements built on different gradings");
}

void require_level(const GradingSpec& spec, int level) {
  if (level < 0 || level > spec.max_level())
    throw level_error("level " + std::to_string(level) + " outside 0.." +
                      std::to_string(spec.max_level()));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// GradedElement
// ---------------------------------------------------------------------------

GradedElement::GradedElement(SpecPtr spec, std::vector<double> cos_coeffs,
                             std::vector<double> sin_coeffs)
    : spec_(std::move(spec)), cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {}

GradedElement GradedElement::zero(SpecPtr spec) {
  const int k = spec->max_degree();
  return GradedElement(std::move(spec), std::vector<double>(static_cast<std::size_t>(k) + 1, 0.0),
                       std::vector<double>(static_cast<std::size_t>(k), 0.0));
}

GradedElement GradedElement::constant(SpecPtr spec, double value) {
  GradedElement x = zero(std::move(spec));
  x.cos_[0] = value;
  return x;
}

GradedElement GradedElement::mode(SpecPtr spec, int k, double amp_cos, double amp_sin) {
  if (k < 0 || k > spec->max_degree())
    throw level_error("mode index " + std::to_string(k) + " outside 0..K");
  GradedElement x = zero(std::move(spec));
  if (k == 0) {
    x.cos_[0] = amp_cos;  // sin(0 theta) contributes nothing
  } else {
    x.cos_[static_cast<std::size_t>(k)] = amp_cos;
    x.sin_[static_cast<std::size_t>(k - 1)] = amp_sin;
  }
  return x;
}

GradedElement GradedElement::from_coeffs(SpecPtr spec, std::vector<double> cos_coeffs,
                                         std::vector<double> sin_coeffs) {
  const auto k = static_cast<std::size_t>(spec->max_degree());
  if (cos_coeffs.size() != k + 1 || sin_coeffs.size() != k)
    throw length_mismatch_error("coefficient vectors do not match degree K");
  for (double c : cos_coeffs)
    if (!std::isfinite(c)) throw config_error("non-finite coefficient");
  for (double c : sin_coeffs)
    if (!std::isfinite(c)) throw config_error("non-finite coefficient");
  return GradedElement(std::move(spec), std::move(cos_coeffs), std::move(sin_coeffs));
}

double GradedElement::value_at(double theta) const {
  double v = cos_[0];
  for (int k = 1; k <= spec_->max_degree(); ++k)
    v += cos_[static_cast<std::size_t>(k)] * std::cos(k * theta) +
         sin_[static_cast<std::size_t>(k - 1)] * std::sin(k * theta);
  return v;
}

GradedElement operator+(const GradedElement& a, const GradedElement& b) {
  detail::require_same_grading(a, b);
  GradedElement out = a;
  for (std::size_t i = 0; i < out.cos_.size(); ++i) out.cos_[i] += b.cos_[i];
  for (std::size_t i = 0; i < out.sin_.size(); ++i) out.sin_[i] += b.sin_[i];
  return out;
}

GradedElement operator-(const GradedElement& a, const GradedElement& b) {
  detail::require_same_grading(a, b);
  GradedElement out = a;
  for (std::size_t i = 0; i < out.cos_.size(); ++i) out.cos_[i] -= b.cos_[i];
  for (std::size_t i = 0; i < out.sin_.size(); ++i) out.sin_[i] -= b.sin_[i];
  return out;
}

GradedElement operator-(const GradedElement& a) {
  GradedElement out = a;
  for (auto& c : out.cos_) c = -c;
  for (auto& c : out.sin_) c = -c;
  return out;
}

GradedElement operator*(double scale, const GradedElement& a) {
  GradedElement out = a;
  for (auto& c : out.cos_) c *= scale;
  for (auto& c : out.sin_) c *= scale;
  return out;
}

void grid_values(const GradedElement& x, std::span<double> out) {
  const GradingSpec& spec = *x.spec();
  const int m = spec.grid_size();
  std::fill(out.begin(), out.end(), x.cos_coeff(0));
  for (int k = 1; k <= spec.max_degree(); ++k) {
    const double a = x.cos_coeff(k);
    const double b = x.sin_coeff(k);
    const auto ck = spec.cos_row(k);
    const auto sk = spec.sin_row(k);
    for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] += a * ck[static_cast<std::size_t>(i)] + b * sk[static_cast<std::size_t>(i)];
  }
}

std::vector<double> grid_values(const GradedElement& x) {
  std::vector<double> out(static_cast<std::size_t>(x.spec()->grid_size()));
  grid_values(x, out);
  return out;
}

GradedElement element_from_grid(const SpecPtr& spec, std::span<const double> values) {
  const int m = spec->grid_size();
  if (static_cast<int>(values.size()) != m)
    throw length_mismatch_error("grid sample count does not match the grading's grid");
  std::vector<double> a(static_cast<std::size_t>(spec->max_degree()) + 1, 0.0);
  std::vector<double> b(static_cast<std::size_t>(spec->max_degree()), 0.0);
  double mean = 0.0;
  for (double v : values) mean += v;
  a[0] = mean / m;
  for (int k = 1; k <= spec->max_degree(); ++k) {
    const auto ck = spec->cos_row(k);
    const auto sk = spec->sin_row(k);
    double ac = 0.0, as = 0.0;
    for (int i = 0; i < m; ++i) {
      ac += values[static_cast<std::size_t>(i)] * ck[static_cast<std::size_t>(i)];
      as += values[static_cast<std::size_t>(i)] * sk[static_cast<std::size_t>(i)];
    }
    a[static_cast<std::size_t>(k)] = 2.0 * ac / m;
    b[static_cast<std::size_t>(k - 1)] = 2.0 * as / m;
  }
  return GradedElement::from_coeffs(spec, std::move(a), std::move(b));
}

// ---------------------------------------------------------------------------
// BoundSeq
// ---------------------------------------------------------------------------

BoundSeq::BoundSeq(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (std::isnan(v) || v < 0.0)
      throw config_error("BoundSeq entries must be >= 0 (or +inf)");
  }
}

BoundSeq BoundSeq::constant(int length, double value) {
  if (length < 0) throw config_error("BoundSeq length must be >= 0");
  return BoundSeq(std::vector<double>(static_cast<std::size_t>(length), value));
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

namespace {

double grid_sup(const GradedElement& x, std::vector<double>& scratch) {
  scratch.resize(static_cast<std::size_t>(x.spec()->grid_size()));
  grid_values(x, scratch);
  double sup = 0.0;
  for (double v : scratch) sup = std::max(sup, std::abs(v));
  return sup;
}

GradedElement derivative_once(const GradedElement& x) {
  const SpecPtr& spec = x.spec();
  std::vector<double> a(static_cast<std::size_t>(spec->max_degree()) + 1, 0.0);
  std::vector<double> b(static_cast<std::size_t>(spec->max_degree()), 0.0);
  for (int k = 1; k <= spec->max_degree(); ++k) {
    a[static_cast<std::size_t>(k)] = k * x.sin_coeff(k);
    b[static_cast<std::size_t>(k - 1)] = -k * x.cos_coeff(k);
  }
  return GradedElement::from_coeffs(spec, std::move(a), std::move(b));
}

}  // namespace

GradedElement derivative(const GradedElement& x, int order) {
  detail::require_level(*x.spec(), order);
  GradedElement d = x;
  for (int j = 0; j < order; ++j) d = derivative_once(d);
  return d;
}

std::vector<double> norms_upto(const GradedElement& x, int level) {
  detail::require_level(*x.spec(), level);
  std::vector<double> out(static_cast<std::size_t>(level) + 1);
  std::vector<double> scratch;
  GradedElement d = x;
  double running = 0.0;
  for (int j = 0; j <= level; ++j) {
    if (j > 0) d = derivative_once(d);
    running = std::max(running, grid_sup(d, scratch));
    out[static_cast<std::size_t>(j)] = running;
  }
  return out;
}

double norm(const GradedElement& x, int level) {
  detail::require_level(*x.spec(), level);
  std::vector<double> scratch;
  GradedElement d = x;
  double running = 0.0;
  for (int j = 0; j <= level; ++j) {
    if (j > 0) d = derivative_once(d);
    running = std::max(running, grid_sup(d, scratch));
  }
  return running;
}

double metric(const GradedElement& x, const GradedElement& y) {
  detail::require_same_grading(x, y);
  const GradedElement diff = x - y;
  const auto level_norms = norms_upto(diff, x.spec()->max_level());
  double best = 0.0;
  double weight = 1.0;  // 2^-n
  for (double nn : level_norms) {
    best = std::max(best, weight * nn / (1.0 + nn));
    weight *= 0.5;
  }
  return best;
}

double metric_truncation_slack(const GradingSpec& spec) noexcept {
  return std::ldexp(1.0, -(spec.max_level() + 1));
}

bool box_contains(const GradedElement& x, const BoundSeq& s, double slack) {
  const int levels = x.spec()->max_level();
  if (s.size() != levels + 1)
    throw length_mismatch_error("bound sequence length does not match level count N+1");
  const auto level_norms = norms_upto(x, levels);
  for (int n = 0; n <= levels; ++n) {
    if (s.is_unbounded(n)) continue;
    if (level_norms[static_cast<std::size_t>(n)] > s[n] * (1.0 + slack)) return false;
  }
  return true;
}

double distance_at_level(const GradedElement& x, std::span<const GradedElement> sample,
                         int level) {
  if (sample.empty()) throw empty_set_error("distance over an empty sample");
  detail::require_level(*x.spec(), level);
  double best = std::numeric_limits<double>::infinity();
  for (const GradedElement& a : sample) best = std::min(best, norm(x - a, level));
  return best;
}

BoundSeq bound_product(const BoundSeq& u, const BoundSeq& s) {
  if (u.size() != s.size()) throw length_mismatch_error("bound sequences of different length");
  std::vector<double> out(static_cast<std::size_t>(u.size()));
  for (int n = 0; n < u.size(); ++n) {
    // keep 0 * inf = 0 rather than NaN: a zero bound wins
    if (u[n] == 0.0 || s[n] == 0.0)
      out[static_cast<std::size_t>(n)] = 0.0;
    else
      out[static_cast<std::size_t>(n)] = u[n] * s[n];
  }
  return BoundSeq(std::move(out));
}

BoundSeq shift_levels(const BoundSeq& s, int d) {
  if (d < 0 || d >= s.size())
    throw level_error("shift " + std::to_string(d) + " exceeds bound sequence length");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(s.size() - d));
  for (int n = d; n < s.size(); ++n) out.push_back(s[n]);
  return BoundSeq(std::move(out));
}

}  // namespace nme
