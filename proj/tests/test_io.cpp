#include <doctest.h>

#include <cmath>

#include "nme/compactness.hpp"
#include "nme/io.hpp"
#include "nme/sampling.hpp"

using namespace nme;
using nlohmann::json;

namespace {

const SpecPtr spec = make_spec(8, 4);

}  // namespace

TEST_CASE("element JSON round-trip is exact") {
  Rng rng(99);
  const GradedElement x = random_element(spec, rng);
  const json j = element_to_json(x);
  CHECK(j.at("K") == spec->max_degree());
  const GradedElement back = element_from_json(spec, json::parse(j.dump()));
  for (int k = 0; k <= spec->max_degree(); ++k) CHECK(back.cos_coeff(k) == x.cos_coeff(k));
  for (int k = 1; k <= spec->max_degree(); ++k) CHECK(back.sin_coeff(k) == x.sin_coeff(k));
}

TEST_CASE("element JSON validation") {
  CHECK_THROWS_AS(element_from_json(spec, json::parse(R"({"K": 3, "a": [], "b": []})")),
                  spec_mismatch_error);
  CHECK_THROWS_AS(element_from_json(spec, json::parse(R"({"K": 8})")), config_error);
  CHECK_THROWS_AS(element_from_json(spec, json::parse(R"({"K": 8, "a": [1], "b": []})")),
                  length_mismatch_error);
}

TEST_CASE("bound sequence JSON with the inf sentinel") {
  const BoundSeq s{{1.0, BoundSeq::unbounded(), 0.25}};
  const json j = bound_seq_to_json(s);
  CHECK(j[1] == "inf");
  const BoundSeq back = bound_seq_from_json(json::parse(j.dump()));
  CHECK(back.size() == 3);
  CHECK(back[0] == 1.0);
  CHECK(back.is_unbounded(1));
  CHECK(back[2] == 0.25);
  CHECK_THROWS_AS(bound_seq_from_json(json::parse(R"([1, "oops"])")), config_error);
}

TEST_CASE("problem config") {
  SUBCASE("catalog lookup with overrides") {
    const json config = {{"problem", "smoothing"}, {"K", 8}, {"N", 4}, {"q", 4}, {"d", 1}};
    const TameProblem p = problem_from_config(config);
    CHECK(p.name == "smoothing");
    CHECK(p.derivative_loss == 1);
    CHECK(p.c_provenance == "analytic");
    CHECK(p.c[0] == 2.0);
  }

  SUBCASE("supplied constants override the catalog") {
    const json config = {{"problem", "smoothing"},
                         {"K", 8},
                         {"N", 4},
                         {"c", json::array({0.1, 0.1, 0.1, 0.1, 0.1})}};
    const TameProblem p = problem_from_config(config);
    CHECK(p.c_provenance == "supplied");
    CHECK(p.c[3] == 0.1);
  }

  SUBCASE("wrong d is rejected") {
    const json config = {{"problem", "smoothing"}, {"K", 8}, {"N", 4}, {"d", 0}};
    CHECK_THROWS_AS(problem_from_config(config), config_error);
  }

  SUBCASE("unknown problem is rejected") {
    CHECK_THROWS_AS(problem_from_config(json{{"problem", "cubic"}}), config_error);
  }
}

TEST_CASE("target mini-language") {
  SUBCASE("single sine term") {
    const GradedElement y = parse_target(spec, "sin:2:0.5");
    CHECK(y.sin_coeff(2) == 0.5);
    CHECK(norm(y - GradedElement::mode(spec, 2, 0.0, 0.5), spec->max_level()) == 0.0);
  }

  SUBCASE("sums of terms") {
    const GradedElement y = parse_target(spec, "sin:1:1+cos:3:-2+cos:0:0.25");
    CHECK(y.sin_coeff(1) == 1.0);
    CHECK(y.cos_coeff(3) == -2.0);
    CHECK(y.cos_coeff(0) == 0.25);
  }

  SUBCASE("malformed terms are rejected") {
    CHECK_THROWS_AS(parse_target(spec, "tan:1:1"), config_error);
    CHECK_THROWS_AS(parse_target(spec, "sin:1"), config_error);
    CHECK_THROWS_AS(parse_target(spec, "sin:x:1"), config_error);
    CHECK_THROWS_AS(parse_target(spec, ""), config_error);
    CHECK_THROWS_AS(parse_target(spec, "sin:99:1"), level_error);
  }
}

TEST_CASE("extraction result JSON") {
  const SequenceSource source{
      .generator = [](int) { return GradedElement::constant(spec, 1.0); },
      .declared_bounds = std::nullopt};
  const ExtractionResult result =
      extract_convergent(source, spec->max_level(), 0.1, 3, 8);
  const json j = extraction_to_json(result);
  CHECK(j.at("indices") == json::array({0, 1, 2}));
  CHECK(j.at("per_level_tol").size() == static_cast<std::size_t>(spec->max_level()) + 1);
}

TEST_CASE("verify report on the identity problem has unit ratios") {
  const TameProblem id = make_identity_problem(spec);
  Rng rng(31);
  const GradedElement y = random_element(spec, rng);
  ContinuationConfig config;
  config.eps = 1e-9;
  const SolveOutcome outcome = solve(id, y, config);
  REQUIRE(outcome.success());
  const BoundReport report = verify_theorem_bounds(outcome, id, y, 0.0, 1e-9);
  CHECK(report.pass);
  for (double ratio : report.ratio) CHECK(ratio == doctest::Approx(1.0).epsilon(1e-12));
  const json j = bound_report_to_json(report);
  CHECK(j.at("pass") == true);
}

TEST_CASE("outcome JSON carries the wire fields") {
  const TameProblem id = make_identity_problem(spec);
  Rng rng(5);
  const GradedElement y = random_element(spec, rng);
  ContinuationConfig config;
  config.eps = 1e-9;
  const SolveOutcome outcome = solve(id, y, config);
  const json j = outcome_to_json(outcome);
  CHECK(j.at("status") == "Success");
  CHECK(j.at("t_final") == 1.0);
  CHECK(j.at("x").at("K") == spec->max_degree());
  CHECK(j.at("residual_certified").size() == static_cast<std::size_t>(spec->max_level()) + 1);
}
