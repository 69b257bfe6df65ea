#include <cmath>
#include <vector>

#include "doctest.h"
#include "flatnorm/bl_function.hpp"
#include "flatnorm/charge.hpp"
#include "flatnorm/errors.hpp"
#include "flatnorm/metric_space.hpp"

using namespace flatnorm;

namespace {
SpacePtr line4() {
  return build_euclidean_exact({{0.0}, {1.0}, {2.0}, {3.0}});
}
}  // namespace

TEST_CASE("from_weights merges duplicates and drops dust") {
  const auto s = line4();
  const auto q = Charge::from_weights(
      s, {{2, 1.0}, {0, 0.5}, {2, -1.0}, {1, 1e-16}});
  CHECK(q.support_size() == 1);  // id 2 cancels, id 1 below drop tolerance
  CHECK(q.weight_at(0) == 0.5);
  CHECK(q.weight_at(2) == 0.0);
}

TEST_CASE("arithmetic is pointwise and stays on one space") {
  const auto s = line4();
  const auto a = Charge::dirac(s, 0, 2.0);
  const auto b = Charge::dirac(s, 1, -1.0);
  const auto c = a + b;
  CHECK(total_mass(c) == doctest::Approx(1.0));
  CHECK(total_variation(c) == doctest::Approx(3.0));
  CHECK((a - a).empty());
  CHECK(total_mass(3.0 * b) == doctest::Approx(-3.0));

  const double coeffs[] = {1.0, 2.0};
  const Charge qs[] = {a, b};
  const auto lc = linear_combine(coeffs, qs);
  CHECK(lc.weight_at(0) == doctest::Approx(2.0));
  CHECK(lc.weight_at(1) == doctest::Approx(-2.0));

  const auto other = Charge::dirac(line4(), 0);
  CHECK_THROWS_AS(a + other, DomainError);  // distinct space objects
}

TEST_CASE("integrate pairs weights with function values") {
  const auto s = line4();
  const auto q = Charge::from_weights(s, {{0, 1.0}, {3, -2.0}});
  const auto f = BLFunction::from_callable(
      [](const MetricSpace& sp, PointId p) { return sp.coords(p)[0] / 3.0; },
      1.0, 1.0, "ramp");
  CHECK(integrate(q, f) == doctest::Approx(-2.0));
  CHECK(integrate(q, BLFunction::constant(1.0)) ==
        doctest::Approx(total_mass(q)));
}

TEST_CASE("integrate rejects functions that break their declared bounds") {
  const auto s = line4();
  const auto q = Charge::dirac(s, 3);
  const auto liar = BLFunction::from_callable(
      [](const MetricSpace& sp, PointId p) { return sp.coords(p)[0]; }, 0.5,
      1.0, "oversized");
  CHECK_THROWS_AS(integrate(q, liar), DomainError);
}

TEST_CASE("restrict_outside sums nonnegative mass away from a core") {
  const auto s = line4();
  const auto q = Charge::from_weights(s, {{0, 0.25}, {1, 0.25}, {3, 0.5}});
  const PointId core[] = {0, 1};
  CHECK(restrict_outside(q, core) == doctest::Approx(0.5));
  const PointId all[] = {0, 1, 2, 3};
  CHECK(restrict_outside(q, all) == 0.0);

  const auto signedq = Charge::from_weights(s, {{0, 1.0}, {1, -1.0}});
  CHECK_THROWS_AS(restrict_outside(signedq, core), DomainError);
}

TEST_CASE("separating function has unit data and splits its base point") {
  const auto s = line4();
  const auto f = separating_function(s, 1);
  CHECK(f(*s, 1) == 0.0);
  for (PointId p = 0; p < s->size(); ++p) {
    CHECK(std::fabs(f(*s, p)) <= 1.0);
    if (p != 1) CHECK(f(*s, p) > 0.0);
  }
}
