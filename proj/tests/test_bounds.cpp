#include "nlbvp/bounds.hpp"
#include "nlbvp/ivp.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace nlbvp;
using testing_support::Gen;

TEST_CASE("gronwall upper examples") {
  CHECK(gronwall_upper(3, std::log(2.0)) == doctest::Approx(7.0).epsilon(1e-15));
  CHECK(gronwall_upper(5, 0) == 5.0);
  CHECK(gronwall_upper(0, 1) == doctest::Approx(std::exp(1.0) - 1));
  // y' = mu (1 + y), y(0) = 3 has y(t) = 4 e^{mu t} - 1.
  CHECK(gronwall_upper(3, std::log(2.0)) == doctest::Approx(4 * std::exp(std::log(2.0)) - 1));
}

TEST_CASE("escape lower examples") {
  CHECK(escape_lower(3, std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(escape_lower(5, 0) == 5.0);
  CHECK(escape_lower(0, 10) < 0.0);
  CHECK(escape_lower(0, 10) >= -1.0);
}

TEST_CASE("apriori M examples") {
  CHECK(apriori_M(1, 0) == 1.0);
  CHECK(apriori_M(1, std::log(2.0)) == doctest::Approx((std::log(2.0) + 3) * 2));
  CHECK(apriori_M(2, 1) == doctest::Approx(3 * std::exp(2.0)));
}

TEST_CASE("schauder radius examples") {
  const auto a = schauder_radius(0.5, 1, 0);
  CHECK(a.paper_radius == 2.0);
  REQUIRE(a.corrected_radius.has_value());
  CHECK(*a.corrected_radius == doctest::Approx(2.0));
  CHECK_FALSE(schauder_radius(0.5, 1, std::log(2.0)).corrected_radius.has_value());
  const auto c = schauder_radius(0.25, 1, std::log(2.0));
  REQUIRE(c.corrected_radius.has_value());
  CHECK(*c.corrected_radius == doctest::Approx(2.5));
  const double r = *c.corrected_radius;
  CHECK(0.25 * ((r + 1) * 2 - 1) + 1 <= r + 1e-12);
}

TEST_CASE("property: escape and gronwall envelopes are inverse") {
  Gen gen(31);
  for (int k = 0; k < 1000; ++k) {
    const double a = gen.uniform(0, 100);
    const double m = gen.uniform(0, 5);
    CHECK(std::abs(escape_lower(gronwall_upper(a, m), m) - a) <= 1e-9 * std::max(1.0, a));
  }
}

TEST_CASE("property: bounds are monotone in each argument") {
  Gen gen(32);
  for (int k = 0; k < 1000; ++k) {
    const double a = gen.uniform(0, 10), a2 = a + gen.uniform(0, 5);
    const double m = gen.uniform(0, 3), m2 = m + gen.uniform(0, 2);
    const double R = gen.uniform(0.01, 10), R2 = R + gen.uniform(0, 5);
    CHECK(gronwall_upper(a, m) <= gronwall_upper(a2, m));
    CHECK(gronwall_upper(a, m) <= gronwall_upper(a, m2));
    CHECK(escape_lower(a, m) <= escape_lower(a2, m));
    CHECK(apriori_M(R, m) <= apriori_M(R2, m));
    CHECK(apriori_M(R, m) <= apriori_M(R, m2));
    const double c = gen.uniform(0.01, 0.9), d = gen.uniform(0, 5), d2 = d + gen.uniform(0, 2);
    const double c2 = std::min(0.99, c + gen.uniform(0, 0.05));
    CHECK(schauder_radius(c, d, m).paper_radius <= schauder_radius(c, d2, m).paper_radius);
    CHECK(schauder_radius(c, d, m).paper_radius <= schauder_radius(c2, d, m).paper_radius);
    CHECK(schauder_radius(c, d, m).paper_radius <= schauder_radius(c, d, m2).paper_radius);
  }
}

TEST_CASE("property: corrected radius solves the ball inequality with equality") {
  Gen gen(33);
  for (int k = 0; k < 1000; ++k) {
    const double c = gen.uniform(0.01, 0.99), d = gen.uniform(0, 5), m = gen.uniform(0, 2);
    const auto s = schauder_radius(c, d, m);
    if (c * std::exp(m) >= 1.0 - 1e-9) continue;
    REQUIRE(s.corrected_radius.has_value());
    const double r = *s.corrected_radius;
    CHECK(std::abs(c * ((r + 1) * std::exp(m) - 1) + d - r) <= 1e-9 * std::max(1.0, r));
  }
}

TEST_CASE("envelopes are attained by the scalar equality cases") {
  // y' = mu (1 + y) and y' = -mu (1 + y) integrated as LinearBall singletons.
  const double T = std::log(2.0);
  for (int sign : {1, -1}) {
    const MultiMap map(1, T,
                       LinearBall{Mat::Constant(1, 1, sign), PiecewiseConstant<Vec>(Vec::Constant(1, sign)),
                                  PiecewiseConstant<double>(0.0)});
    const TimeGrid grid(T, 20000);
    const auto traj = integrate(map, Vec::Constant(1, 3.0), grid, SelectionStrategy::center());
    const double target = sign > 0 ? gronwall_upper(3, T) : escape_lower(3, T);
    const double C = (1 + gronwall_upper(3, T)) * 1.0;
    CHECK(std::abs(traj.final()[0] - target) <= C * grid.max_step());
  }
}
