#pragma once
//
// Desk-scale counterparts of the compactness criterion for graded boxes:
// per-level boundedness profiling of element sequences, staged extraction of
// subsequences that are simultaneously clustered at every requested level,
// and membership testing through per-level distances.
//

#include <functional>
#include <optional>
#include <vector>

#include "nme/graded_space.hpp"

namespace nme {

/// Deterministic element sequence: the generator must return an identical
/// element every time it is called with the same index.
struct SequenceSource {
  std::function<GradedElement(int)> generator;
  std::optional<BoundSeq> declared_bounds;  // per-level cap, length N+1
};

struct ExtractionResult {
  std::vector<int> indices;           // strictly increasing
  std::vector<double> per_level_tol;  // achieved cluster radius (half the
                                      // max pairwise distance) per level
};

/// Entry n = max over k < count of norm(x_k, n), for n = 0..N.
/// Throws bounds_violation_error if declared_bounds is exceeded.
BoundSeq sup_norms(const SequenceSource& source, int count);

/// Scans indices [0, scan_limit) and refines level by level: at stage n the
/// surviving pool is greedily partitioned into balls of radius `tol` under
/// ||.||_n and the largest ball (first pivot on ties) survives. Returns the
/// first `want` survivors; every returned pair is within 2*tol at every
/// level <= levels. Throws extraction_exhausted_error when fewer than `want`
/// indices survive -- the sample was too short or tol too small, nothing more.
ExtractionResult extract_convergent(const SequenceSource& source, int levels, double tol,
                                    int want, int scan_limit);

/// true iff distance_at_level(x, sample, n) <= tol for all n = 0..N.
bool membership_via_distances(const GradedElement& x, std::span<const GradedElement> sample,
                              double tol);

}  // namespace nme
