#pragma once
//
// Finite-truncation model of a compactly graded space.
//
// Elements are real trigonometric polynomials of degree <= K. The grading
// is the family of discrete C^n norms ||x||_n = max_{j<=n} sup_grid |x^(j)|,
// evaluated by exact spectral differentiation and a sup over an oversampled
// equispaced grid of M = q*(2K+1) points on [0, 2pi).
//

#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "nme/errors.hpp"

namespace nme {

class GradingSpec {
 public:
  GradingSpec(int max_degree, int max_level, int oversampling = 4);

  int max_degree() const noexcept { return degree_; }     // K
  int max_level() const noexcept { return max_level_; }   // N
  int oversampling() const noexcept { return oversample_; }
  int grid_size() const noexcept { return grid_; }        // M = q*(2K+1)
  int coeff_count() const noexcept { return 2 * degree_ + 1; }

  double grid_point(int i) const;  // theta_i = 2 pi i / M

  // Precomputed cos(k theta_i) / sin(k theta_i) rows, k = 0..K.
  std::span<const double> cos_row(int k) const;
  std::span<const double> sin_row(int k) const;

 private:
  int degree_;
  int max_level_;
  int oversample_;
  int grid_;
  std::vector<std::vector<double>> cos_table_;
  std::vector<std::vector<double>> sin_table_;
};

using SpecPtr = std::shared_ptr<const GradingSpec>;

SpecPtr make_spec(int max_degree, int max_level, int oversampling = 4);

/// Same (K, N, q); elements living on equal gradings are interoperable.
bool same_grading(const GradingSpec& a, const GradingSpec& b) noexcept;

// ---------------------------------------------------------------------------
// GradedElement
// ---------------------------------------------------------------------------

/// Immutable value type: a_0 + sum_k (a_k cos k theta + b_k sin k theta).
class GradedElement {
 public:
  static GradedElement zero(SpecPtr spec);
  static GradedElement constant(SpecPtr spec, double value);
  /// Single-mode element amp_cos*cos(k theta) + amp_sin*sin(k theta).
  static GradedElement mode(SpecPtr spec, int k, double amp_cos, double amp_sin);
  static GradedElement from_coeffs(SpecPtr spec, std::vector<double> cos_coeffs,
                                   std::vector<double> sin_coeffs);

  const SpecPtr& spec() const noexcept { return spec_; }
  double cos_coeff(int k) const { return cos_[static_cast<std::size_t>(k)]; }  // k = 0..K
  double sin_coeff(int k) const { return sin_[static_cast<std::size_t>(k - 1)]; }  // k = 1..K
  std::span<const double> cos_coeffs() const noexcept { return cos_; }
  std::span<const double> sin_coeffs() const noexcept { return sin_; }

  /// Pointwise evaluation at an arbitrary angle (used by oracles and reports;
  /// grid work goes through grid_values).
  double value_at(double theta) const;

  friend GradedElement operator+(const GradedElement& a, const GradedElement& b);
  friend GradedElement operator-(const GradedElement& a, const GradedElement& b);
  friend GradedElement operator-(const GradedElement& a);
  friend GradedElement operator*(double scale, const GradedElement& a);

 private:
  GradedElement(SpecPtr spec, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

  SpecPtr spec_;
  std::vector<double> cos_;  // a_0..a_K
  std::vector<double> sin_;  // b_1..b_K
};

/// Synthesis on the grading's grid: out[i] = x(theta_i). out.size() == grid_size.
void grid_values(const GradedElement& x, std::span<double> out);
std::vector<double> grid_values(const GradedElement& x);

/// Analysis: degree-K projection of grid samples (exact for trig polynomials
/// of degree <= 2K, which covers pointwise products of two elements).
GradedElement element_from_grid(const SpecPtr& spec, std::span<const double> values);

// ---------------------------------------------------------------------------
// BoundSeq
// ---------------------------------------------------------------------------

/// Truncated sequence of per-level bounds s_0..s_L, entries >= 0.
/// +infinity is a legal entry and means "unbounded at this level".
class BoundSeq {
 public:
  BoundSeq() = default;
  explicit BoundSeq(std::vector<double> values);
  static BoundSeq constant(int length, double value);
  static double unbounded() noexcept { return std::numeric_limits<double>::infinity(); }

  int size() const noexcept { return static_cast<int>(values_.size()); }
  double operator[](int n) const { return values_[static_cast<std::size_t>(n)]; }
  bool is_unbounded(int n) const { return std::isinf(values_[static_cast<std::size_t>(n)]); }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Exact spectral j-th derivative. 0 <= j <= N.
GradedElement derivative(const GradedElement& x, int order);

/// Discrete C^n norm: max_{j=0..n} sup over the grid of |x^(j)|.
double norm(const GradedElement& x, int level);

/// norms_upto(x, n)[j] = norm(x, j) for j = 0..n, in one sweep.
std::vector<double> norms_upto(const GradedElement& x, int level);

/// Translation-invariant metric max_{n=0..N} 2^-n ||x-y||_n / (1 + ||x-y||_n).
/// Truncation at N omits only terms < metric_truncation_slack(spec).
double metric(const GradedElement& x, const GradedElement& y);

/// Certified slack of the level-truncated metric: 2^-(N+1).
double metric_truncation_slack(const GradingSpec& spec) noexcept;

/// true iff norm(x, n) <= s_n * (1 + slack) for every level n = 0..N.
/// s must have N+1 entries; unbounded entries always pass.
bool box_contains(const GradedElement& x, const BoundSeq& s, double slack);

/// min over the (nonempty) sample of ||x - a||_n.
double distance_at_level(const GradedElement& x, std::span<const GradedElement> sample,
                         int level);

/// Entrywise product; 0 * unbounded = 0.
BoundSeq bound_product(const BoundSeq& u, const BoundSeq& s);

/// Drops the first d levels: (s_d, ..., s_L). Requires d <= L.
BoundSeq shift_levels(const BoundSeq& s, int d);

namespace detail {
void require_same_grading(const GradedElement& a, const GradedElement& b);
void require_level(const GradingSpec& spec, int level);
}  // namespace detail

}  // namespace nme
