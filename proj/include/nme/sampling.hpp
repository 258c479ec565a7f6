#pragma once
//
// Seeded, reproducible sampling of graded elements. All randomized routines
// in the library take an explicit Rng so a single seed pins every draw.
//

#include <cstdint>
#include <random>

#include "nme/graded_space.hpp"

namespace nme {

/// mt19937_64 with uniform doubles built from raw 64-bit draws, so the
/// stream is identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [-1, 1].
  double symmetric() { return 2.0 * uniform() - 1.0; }

  /// Uniform integer in [0, bound).
  int below(int bound) { return static_cast<int>(next() % static_cast<std::uint64_t>(bound)); }

  /// Independent child stream; used to give sub-tasks their own seeds.
  Rng split() { return Rng(next() ^ 0x9e3779b97f4a7c15ULL); }

 private:
  std::mt19937_64 engine_;
};

struct SampleOptions {
  int max_mode = -1;      // -1 means the full band 0..K
  double amplitude = 1.0; // coefficient scale
  double decay = 0.0;     // coefficients damped by (1+k)^-decay
};

/// Random element with coefficients amplitude * U[-1,1] * (1+k)^-decay for
/// modes k <= max_mode, zero above.
GradedElement random_element(const SpecPtr& spec, Rng& rng, const SampleOptions& options = {});

/// Random single-mode element with a uniform amplitude in [-amplitude, amplitude].
GradedElement random_single_mode(const SpecPtr& spec, Rng& rng, double amplitude = 1.0);

}  // namespace nme
