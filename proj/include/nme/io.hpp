#pragma once
//
// JSON wire formats. Elements: {"K": int, "a": [a_0..a_K], "b": [b_1..b_K]}.
// Bound sequences: arrays that admit the string sentinel "inf".
//

#include <json.hpp>

#include "nme/compactness.hpp"
#include "nme/continuation.hpp"
#include "nme/graded_space.hpp"
#include "nme/tame_problems.hpp"

namespace nme {

nlohmann::json element_to_json(const GradedElement& x);
GradedElement element_from_json(const SpecPtr& spec, const nlohmann::json& j);

nlohmann::json bound_seq_to_json(const BoundSeq& s);
BoundSeq bound_seq_from_json(const nlohmann::json& j);

nlohmann::json extraction_to_json(const ExtractionResult& r);

nlohmann::json tame_report_to_json(const TameCheckReport& r);
nlohmann::json bound_report_to_json(const BoundReport& r);
nlohmann::json outcome_to_json(const SolveOutcome& outcome);

/// Problem configuration:
///   {"problem": name, "mu": real, "K": int, "N": int, "q": int,
///    "c": [..] | "estimate", "d": int}
/// "mu" applies to the quadratic families; "c"/"d" may be omitted to take
/// the catalog values, and an explicit "c" array overrides them
/// (provenance "supplied").
TameProblem problem_from_config(const nlohmann::json& config);

/// Target mini-language: "sin:k:amp", "cos:k:amp", sums joined with '+'.
GradedElement parse_target(const SpecPtr& spec, const std::string& text);

}  // namespace nme
