#include <doctest.h>

#include <cmath>
#include <future>
#include <numbers>
#include <vector>

#include "nme/graded_space.hpp"
#include "nme/sampling.hpp"

using namespace nme;

namespace {

const SpecPtr spec = make_spec(8, 4);

// Independent differentiation oracle: central difference at the grid points,
// evaluated pointwise off-grid.
std::vector<double> finite_difference_grid(const GradedElement& x, double delta) {
  std::vector<double> out(static_cast<std::size_t>(spec->grid_size()));
  for (int i = 0; i < spec->grid_size(); ++i) {
    const double theta = spec->grid_point(i);
    out[static_cast<std::size_t>(i)] =
        (x.value_at(theta + delta) - x.value_at(theta - delta)) / (2.0 * delta);
  }
  return out;
}

}  // namespace

TEST_CASE("spectral derivative") {
  SUBCASE("constant has zero derivative") {
    const GradedElement c = GradedElement::constant(spec, 5.0);
    const GradedElement dc = derivative(c, 1);
    CHECK(norm(dc, spec->max_level()) == 0.0);
  }

  SUBCASE("second derivative of sin is -sin") {
    const GradedElement s = GradedElement::mode(spec, 1, 0.0, 1.0);
    const GradedElement dd = derivative(s, 2);
    CHECK(norm(dd + s, spec->max_level()) == doctest::Approx(0.0).epsilon(1e-14));
  }

  SUBCASE("derivative of sin(2t) matches the finite-difference oracle") {
    const GradedElement s2 = GradedElement::mode(spec, 2, 0.0, 1.0);
    const GradedElement d = derivative(s2, 1);
    const auto expected = finite_difference_grid(s2, 1e-5);
    const auto actual = grid_values(d);
    for (std::size_t i = 0; i < actual.size(); ++i)
      CHECK(std::abs(actual[i] - expected[i]) <= 1e-8);
    // and it is exactly 2 cos(2t)
    const GradedElement two_cos = GradedElement::mode(spec, 2, 2.0, 0.0);
    CHECK(norm(d - two_cos, 0) == 0.0);
  }

  SUBCASE("order outside 0..N is rejected") {
    const GradedElement s = GradedElement::mode(spec, 1, 0.0, 1.0);
    CHECK_THROWS_AS(derivative(s, spec->max_level() + 1), level_error);
    CHECK_THROWS_AS(derivative(s, -1), level_error);
  }
}

TEST_CASE("graded norms") {
  SUBCASE("constants have norm |c| at every level") {
    const GradedElement c = GradedElement::constant(spec, -3.25);
    for (int n = 0; n <= spec->max_level(); ++n) CHECK(norm(c, n) == 3.25);
  }

  SUBCASE("zero element has norm 0") {
    CHECK(norm(GradedElement::zero(spec), spec->max_level()) == 0.0);
  }

  SUBCASE("sin(2t) at level 1: sup of the derivative 2cos(2t) is exact") {
    const GradedElement s2 = GradedElement::mode(spec, 2, 0.0, 1.0);
    CHECK(norm(s2, 1) == doctest::Approx(2.0).epsilon(1e-14));
  }

  SUBCASE("norm is zero only for the zero element") {
    const GradedElement tiny = GradedElement::mode(spec, 3, 0.0, 1e-13);
    CHECK(norm(tiny, 0) > 0.0);
  }

  SUBCASE("level range is enforced") {
    const GradedElement s = GradedElement::mode(spec, 1, 0.0, 1.0);
    CHECK_THROWS_AS(norm(s, spec->max_level() + 1), level_error);
  }
}

TEST_CASE("metric") {
  Rng rng(7);
  const GradedElement x = random_element(spec, rng);

  SUBCASE("identity") { CHECK(metric(x, x) == 0.0); }

  SUBCASE("offset by constant 1 gives 0.5") {
    const GradedElement y = x + GradedElement::constant(spec, 1.0);
    CHECK(metric(x, y) == doctest::Approx(0.5).epsilon(1e-14));
  }

  SUBCASE("offset by constant 3 gives 0.75") {
    const GradedElement y = x + GradedElement::constant(spec, 3.0);
    CHECK(metric(x, y) == doctest::Approx(0.75).epsilon(1e-14));
  }

  SUBCASE("mismatched gradings are rejected") {
    const SpecPtr other = make_spec(8, 3);
    CHECK_THROWS_AS(metric(x, GradedElement::zero(other)), spec_mismatch_error);
  }

  SUBCASE("truncation slack") {
    CHECK(metric_truncation_slack(*spec) == std::ldexp(1.0, -(spec->max_level() + 1)));
  }
}

TEST_CASE("boxes") {
  const GradedElement s2 = GradedElement::mode(spec, 2, 0.0, 1.0);

  SUBCASE("zero element is in every box") {
    CHECK(box_contains(GradedElement::zero(spec), BoundSeq::constant(spec->max_level() + 1, 0.0),
                       0.0));
  }

  SUBCASE("sin(2t) against the all-ones box fails at level 1") {
    CHECK_FALSE(box_contains(s2, BoundSeq::constant(spec->max_level() + 1, 1.0), 0.0));
  }

  SUBCASE("sin(2t) fits the dyadic box 2^n") {
    std::vector<double> caps;
    for (int n = 0; n <= spec->max_level(); ++n) caps.push_back(std::ldexp(1.0, n));
    CHECK(box_contains(s2, BoundSeq{std::move(caps)}, 0.0));
  }

  SUBCASE("unbounded sentinel levels always pass") {
    std::vector<double> caps(static_cast<std::size_t>(spec->max_level()) + 1,
                             BoundSeq::unbounded());
    caps[0] = 1.0;
    CHECK(box_contains(s2, BoundSeq{std::move(caps)}, 0.0));
  }

  SUBCASE("wrong length is rejected") {
    CHECK_THROWS_AS(box_contains(s2, BoundSeq::constant(spec->max_level(), 1.0), 0.0),
                    length_mismatch_error);
  }
}

TEST_CASE("per-level distance") {
  const GradedElement zero = GradedElement::zero(spec);
  const GradedElement sine = GradedElement::mode(spec, 1, 0.0, 1.0);

  SUBCASE("member at distance zero") {
    const std::vector<GradedElement> sample{zero, sine};
    CHECK(distance_at_level(sine, sample, 0) == 0.0);
  }

  SUBCASE("distance from sin to {0} at level 0 is 1") {
    const std::vector<GradedElement> sample{zero};
    CHECK(distance_at_level(sine, sample, 0) == doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("nearest of two constants") {
    const std::vector<GradedElement> sample{zero, GradedElement::constant(spec, 2.0)};
    const GradedElement x = GradedElement::constant(spec, 1.5);
    CHECK(distance_at_level(x, sample, 2) == doctest::Approx(0.5).epsilon(1e-14));
  }

  SUBCASE("empty sample is rejected") {
    CHECK_THROWS_AS(distance_at_level(sine, {}, 0), empty_set_error);
  }
}

TEST_CASE("bound sequences") {
  SUBCASE("entrywise product") {
    const BoundSeq u{{1.0, 2.0, 3.0}};
    const BoundSeq s{{4.0, 5.0, 6.0}};
    const BoundSeq p = bound_product(u, s);
    CHECK(p[0] == 4.0);
    CHECK(p[1] == 10.0);
    CHECK(p[2] == 18.0);
  }

  SUBCASE("ones act as identity, zeros annihilate") {
    const BoundSeq s{{4.0, 5.0, 6.0}};
    const BoundSeq ones = BoundSeq::constant(3, 1.0);
    const BoundSeq zeros = BoundSeq::constant(3, 0.0);
    for (int n = 0; n < 3; ++n) {
      CHECK(bound_product(ones, s)[n] == s[n]);
      CHECK(bound_product(zeros, s)[n] == 0.0);
    }
    // zero wins against the sentinel
    const BoundSeq inf_seq = BoundSeq::constant(3, BoundSeq::unbounded());
    CHECK(bound_product(zeros, inf_seq)[1] == 0.0);
  }

  SUBCASE("length mismatch is rejected") {
    CHECK_THROWS_AS(bound_product(BoundSeq::constant(2, 1.0), BoundSeq::constant(3, 1.0)),
                    length_mismatch_error);
  }

  SUBCASE("level shift") {
    const BoundSeq s{{1.0, 2.0, 3.0, 4.0}};
    const BoundSeq same = shift_levels(s, 0);
    CHECK(same.size() == 4);
    CHECK(same[0] == 1.0);
    const BoundSeq by_one = shift_levels(s, 1);
    CHECK(by_one.size() == 3);
    CHECK(by_one[0] == 2.0);
    CHECK(by_one[2] == 4.0);
    const BoundSeq by_three = shift_levels(s, 3);
    CHECK(by_three.size() == 1);
    CHECK(by_three[0] == 4.0);
    CHECK_THROWS_AS(shift_levels(s, 4), level_error);
  }

  SUBCASE("negative entries are rejected") {
    CHECK_THROWS_AS((void)BoundSeq(std::vector<double>{1.0, -0.5}), config_error);
  }
}

TEST_CASE("vector-space closure under the shared grading") {
  Rng rng(11);
  const GradedElement x = random_element(spec, rng);
  const GradedElement y = random_element(spec, rng);
  const GradedElement sum = x + y;
  for (int k = 0; k <= spec->max_degree(); ++k)
    CHECK(sum.cos_coeff(k) == x.cos_coeff(k) + y.cos_coeff(k));
  const SpecPtr other = make_spec(6, 4);
  CHECK_THROWS_AS(x + GradedElement::zero(other), spec_mismatch_error);
}

TEST_CASE("grid analysis inverts synthesis for band-limited data") {
  Rng rng(13);
  const GradedElement x = random_element(spec, rng);
  const GradedElement back = element_from_grid(spec, grid_values(x));
  CHECK(norm(back - x, spec->max_level()) < 1e-12 * (1.0 + norm(x, spec->max_level())));
}

TEST_CASE("operations are safe under concurrent callers") {
  Rng rng(29);
  const GradedElement x = random_element(spec, rng);
  const GradedElement y = random_element(spec, rng);
  const double expected = metric(x, y);
  std::vector<std::future<double>> tasks;
  for (int i = 0; i < 8; ++i)
    tasks.push_back(std::async(std::launch::async, [&] { return metric(x, y); }));
  for (auto& task : tasks) CHECK(task.get() == expected);
}
