#include "nme/io.hpp"

#include <cmath>
#include <sstream>

namespace nme {

using nlohmann::json;

json element_to_json(const GradedElement& x) {
  json j;
  j["K"] = x.spec()->max_degree();
  j["a"] = std::vector<double>(x.cos_coeffs().begin(), x.cos_coeffs().end());
  j["b"] = std::vector<double>(x.sin_coeffs().begin(), x.sin_coeffs().end());
  return j;
}

GradedElement element_from_json(const SpecPtr& spec, const json& j) {
  if (!j.is_object() || !j.contains("K") || !j.contains("a") || !j.contains("b"))
    throw config_error("element JSON needs fields K, a, b");
  if (j.at("K").get<int>() != spec->max_degree())
    throw spec_mismatch_error("element degree K does not match the grading");
  auto a = j.at("a").get<std::vector<double>>();
  auto b = j.at("b").get<std::vector<double>>();
  return GradedElement::from_coeffs(spec, std::move(a), std::move(b));
}

json bound_seq_to_json(const BoundSeq& s) {
  json j = json::array();
  for (int n = 0; n < s.size(); ++n) {
    if (s.is_unbounded(n))
      j.push_back("inf");
    else
      j.push_back(s[n]);
  }
  return j;
}

BoundSeq bound_seq_from_json(const json& j) {
  if (!j.is_array()) throw config_error("bound sequence JSON must be an array");
  std::vector<double> values;
  values.reserve(j.size());
  for (const auto& entry : j) {
    if (entry.is_string()) {
      if (entry.get<std::string>() != "inf")
        throw config_error("bound sequence: only the sentinel \"inf\" is allowed");
      values.push_back(BoundSeq::unbounded());
    } else {
      values.push_back(entry.get<double>());
    }
  }
  return BoundSeq(std::move(values));
}

json extraction_to_json(const ExtractionResult& r) {
  return json{{"indices", r.indices}, {"per_level_tol", r.per_level_tol}};
}

json tame_report_to_json(const TameCheckReport& r) {
  return json{{"inverse_residual", r.inverse_residual},
              {"bound_ratio", r.bound_ratio},
              {"exempt", r.level_exempt},
              {"pass", r.pass}};
}

json bound_report_to_json(const BoundReport& r) {
  return json{{"bound_ratio", r.ratio},
              {"bound_pass", r.bound_pass},
              {"residual_recheck", r.residual_recheck},
              {"residual_pass", r.residual_pass},
              {"pass", r.pass}};
}

json outcome_to_json(const SolveOutcome& outcome) {
  json j;
  j["status"] = to_string(outcome.status);
  j["t_final"] = outcome.t_final;
  j["x"] = element_to_json(outcome.x_final);
  j["monitored_levels"] = outcome.trace.monitored_levels;
  j["steps_recorded"] = outcome.trace.records.size();
  j["residual_certified"] = outcome.residual_certified;
  j["bound_certified"] = outcome.bound_certified;
  j["message"] = outcome.message;
  return j;
}

TameProblem problem_from_config(const json& config) {
  if (!config.is_object()) throw config_error("problem config must be a JSON object");
  const std::string name = config.value("problem", "");
  const int degree = config.value("K", 16);
  const int levels = config.value("N", 4);
  const int oversampling = config.value("q", 4);
  const double mu = config.value("mu", 1.0);
  SpecPtr spec = make_spec(degree, levels, oversampling);

  TameProblem problem = [&] {
    if (name == "identity") return make_identity_problem(spec);
    if (name == "quadratic") return make_quadratic_problem(spec, mu);
    if (name == "smoothing") return make_smoothing_problem(spec);
    if (name == "nonlinear_smoothing") return make_nonlinear_smoothing_problem(spec, mu);
    throw config_error("unknown problem \"" + name + "\"");
  }();

  if (config.contains("d") && config.at("d").get<int>() != problem.derivative_loss)
    throw config_error(name + ": configured d does not match the catalog value " +
                       std::to_string(problem.derivative_loss));

  if (config.contains("c") && !(config.at("c").is_string() && config.at("c") == "estimate")) {
    problem.c = bound_seq_from_json(config.at("c"));
    problem.c_provenance = "supplied";
    validate_problem(problem);
  }
  return problem;
}

GradedElement parse_target(const SpecPtr& spec, const std::string& text) {
  GradedElement out = GradedElement::zero(spec);
  std::stringstream terms(text);
  std::string term;
  bool any = false;
  while (std::getline(terms, term, '+')) {
    if (term.empty()) continue;
    std::stringstream fields(term);
    std::string kind, mode_text, amp_text;
    if (!std::getline(fields, kind, ':') || !std::getline(fields, mode_text, ':') ||
        !std::getline(fields, amp_text))
      throw config_error("target term \"" + term + "\": want sin:k:amp or cos:k:amp");
    int k = 0;
    double amp = 0.0;
    try {
      k = std::stoi(mode_text);
      amp = std::stod(amp_text);
    } catch (const std::exception&) {
      throw config_error("target term \"" + term + "\": bad number");
    }
    if (kind == "sin")
      out = out + GradedElement::mode(spec, k, 0.0, amp);
    else if (kind == "cos")
      out = out + GradedElement::mode(spec, k, amp, 0.0);
    else
      throw config_error("target term \"" + term + "\": kind must be sin or cos");
    any = true;
  }
  if (!any) throw config_error("empty target expression");
  return out;
}

}  // namespace nme
