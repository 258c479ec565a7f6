#include "nme/compactness.hpp"

#include <algorithm>
#include <string>

namespace nme {

namespace {

void check_declared_bounds(const BoundSeq& declared, const std::vector<double>& profile,
                           int seen) {
  const int levels = std::min<int>(declared.size(), static_cast<int>(profile.size()));
  for (int n = 0; n < levels; ++n) {
    if (declared.is_unbounded(n)) continue;
    if (profile[static_cast<std::size_t>(n)] > declared[n])
      throw bounds_violation_error("sequence exceeds declared bound at level " +
                                   std::to_string(n) + " within the first " +
                                   std::to_string(seen) + " terms");
  }
}

}  // namespace

BoundSeq sup_norms(const SequenceSource& source, int count) {
  if (count < 1) throw config_error("sup_norms needs count >= 1");
  const GradedElement first = source.generator(0);
  const int levels = first.spec()->max_level();
  std::vector<double> profile(static_cast<std::size_t>(levels) + 1, 0.0);
  for (int k = 0; k < count; ++k) {
    const GradedElement x = k == 0 ? first : source.generator(k);
    const auto norms = norms_upto(x, levels);
    for (int n = 0; n <= levels; ++n)
      profile[static_cast<std::size_t>(n)] =
          std::max(profile[static_cast<std::size_t>(n)], norms[static_cast<std::size_t>(n)]);
  }
  if (source.declared_bounds) check_declared_bounds(*source.declared_bounds, profile, count);
  return BoundSeq(profile);
}

ExtractionResult extract_convergent(const SequenceSource& source, int levels, double tol,
                                    int want, int scan_limit) {
  if (want < 2) throw config_error("extract_convergent needs want >= 2");
  if (tol <= 0.0) throw config_error("extract_convergent needs tol > 0");
  if (scan_limit < want) throw config_error("scan_limit smaller than want");

  std::vector<GradedElement> elements;
  elements.reserve(static_cast<std::size_t>(scan_limit));
  for (int k = 0; k < scan_limit; ++k) elements.push_back(source.generator(k));
  detail::require_level(*elements.front().spec(), levels);

  if (source.declared_bounds) {
    std::vector<double> profile(static_cast<std::size_t>(levels) + 1, 0.0);
    for (const auto& x : elements) {
      const auto norms = norms_upto(x, levels);
      for (int n = 0; n <= levels; ++n)
        profile[static_cast<std::size_t>(n)] =
            std::max(profile[static_cast<std::size_t>(n)], norms[static_cast<std::size_t>(n)]);
    }
    check_declared_bounds(*source.declared_bounds, profile, scan_limit);
  }

  std::vector<int> pool(static_cast<std::size_t>(scan_limit));
  for (int k = 0; k < scan_limit; ++k) pool[static_cast<std::size_t>(k)] = k;

  // Stage n keeps one tol-ball of the current pool, refining level 0 first.
  for (int n = 0; n <= levels; ++n) {
    std::vector<int> best;
    std::vector<char> assigned(pool.size(), 0);
    for (std::size_t p = 0; p < pool.size(); ++p) {
      if (assigned[p]) continue;
      std::vector<int> ball;
      for (std::size_t j = p; j < pool.size(); ++j) {
        if (assigned[j]) continue;
        if (norm(elements[static_cast<std::size_t>(pool[j])] -
                     elements[static_cast<std::size_t>(pool[p])],
                 n) <= tol) {
          ball.push_back(pool[j]);
          assigned[j] = 1;
        }
      }
      if (ball.size() > best.size()) best = std::move(ball);
    }
    pool = std::move(best);
    if (static_cast<int>(pool.size()) < want)
      throw extraction_exhausted_error(
          "level-" + std::to_string(n) + " refinement left " + std::to_string(pool.size()) +
          " of the needed " + std::to_string(want) +
          " indices; enlarge scan_limit or relax tol");
  }

  ExtractionResult result;
  result.indices.assign(pool.begin(), pool.begin() + want);
  result.per_level_tol.resize(static_cast<std::size_t>(levels) + 1, 0.0);
  for (int n = 0; n <= levels; ++n) {
    double diameter = 0.0;
    for (std::size_t i = 0; i < result.indices.size(); ++i)
      for (std::size_t j = i + 1; j < result.indices.size(); ++j)
        diameter = std::max(
            diameter, norm(elements[static_cast<std::size_t>(result.indices[i])] -
                               elements[static_cast<std::size_t>(result.indices[j])],
                           n));
    result.per_level_tol[static_cast<std::size_t>(n)] = 0.5 * diameter;
  }
  return result;
}

bool membership_via_distances(const GradedElement& x, std::span<const GradedElement> sample,
                              double tol) {
  if (sample.empty()) throw empty_set_error("membership test against an empty sample");
  for (int n = 0; n <= x.spec()->max_level(); ++n)
    if (distance_at_level(x, sample, n) > tol) return false;
  return true;
}

}  // namespace nme
