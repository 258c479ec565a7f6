#include "nme/sampling.hpp"

#include <cmath>

namespace nme {

GradedElement random_element(const SpecPtr& spec, Rng& rng, const SampleOptions& options) {
  const int degree = spec->max_degree();
  const int top = options.max_mode < 0 ? degree : std::min(options.max_mode, degree);
  std::vector<double> a(static_cast<std::size_t>(degree) + 1, 0.0);
  std::vector<double> b(static_cast<std::size_t>(degree), 0.0);
  for (int k = 0; k <= top; ++k) {
    const double damp =
        options.decay == 0.0 ? 1.0 : std::pow(1.0 + k, -options.decay);
    a[static_cast<std::size_t>(k)] = options.amplitude * damp * rng.symmetric();
    if (k >= 1) b[static_cast<std::size_t>(k - 1)] = options.amplitude * damp * rng.symmetric();
  }
  return GradedElement::from_coeffs(spec, std::move(a), std::move(b));
}

GradedElement random_single_mode(const SpecPtr& spec, Rng& rng, double amplitude) {
  const int k = rng.below(spec->max_degree() + 1);
  const double amp = amplitude * rng.symmetric();
  if (k == 0) return GradedElement::constant(spec, amp);
  const bool use_cos = rng.uniform() < 0.5;
  return GradedElement::mode(spec, k, use_cos ? amp : 0.0, use_cos ? 0.0 : amp);
}

}  // namespace nme
