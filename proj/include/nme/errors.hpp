#pragma once

#include <stdexcept>
#include <string>

namespace nme {

/// Norm level outside the grading's 0..N range.
class level_error : public std::out_of_range {
 public:
  explicit level_error(const std::string& what) : std::out_of_range(what) {}
};

/// Two elements (or an element and a bound sequence) built on different gradings.
class spec_mismatch_error : public std::invalid_argument {
 public:
  explicit spec_mismatch_error(const std::string& what) : std::invalid_argument(what) {}
};

class length_mismatch_error : public std::invalid_argument {
 public:
  explicit length_mismatch_error(const std::string& what) : std::invalid_argument(what) {}
};

class empty_set_error : public std::invalid_argument {
 public:
  explicit empty_set_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A sequence source exceeded its declared per-level bounds.
class bounds_violation_error : public std::runtime_error {
 public:
  explicit bounds_violation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Scan budget exhausted before enough clustered indices were found.
/// Signals a short sample or too small a tolerance, not a disproof.
class extraction_exhausted_error : public std::runtime_error {
 public:
  explicit extraction_exhausted_error(const std::string& what) : std::runtime_error(what) {}
};

/// An oracle was evaluated outside its guarded domain.
class guard_error : public std::domain_error {
 public:
  explicit guard_error(const std::string& what) : std::domain_error(what) {}
};

class sampler_error : public std::runtime_error {
 public:
  explicit sampler_error(const std::string& what) : std::runtime_error(what) {}
};

/// Degenerate sampling while estimating tame constants.
class estimation_error : public std::runtime_error {
 public:
  explicit estimation_error(const std::string& what) : std::runtime_error(what) {}
};

class config_error : public std::invalid_argument {
 public:
  explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

class newton_divergence_error : public std::runtime_error {
 public:
  explicit newton_divergence_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nme
