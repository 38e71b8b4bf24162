#include "nlbvp/multimap.hpp"
#include "nlbvp/potential.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace nlbvp;
using testing_support::Gen;
using testing_support::linear_ball;
using testing_support::scalar_matrix;
using testing_support::vec;
using testing_support::vec1;

namespace {

const Potential half_sq2 = Potential::half_norm_squared(2);

MultiMap shrinking_ball() { return linear_ball(scalar_matrix(2, -1), vec({0, 0}), 0.5, 1.0); }

}  // namespace

TEST_CASE("value examples") {
  const auto set = shrinking_ball().value(0.0, vec({2, 0}));
  const auto& ball = std::get<Ball>(set.shape());
  CHECK(ball.center == vec({-2, 0}));
  CHECK(ball.radius == 0.5);

  const MultiMap relay(1, 1.0, Relay{1.0});
  const auto at_zero = relay.value(0.0, vec1(0.0));
  const auto& interval = std::get<Polytope>(at_zero.shape());
  REQUIRE(interval.vertices.size() == 2);
  CHECK(std::min(interval.vertices[0][0], interval.vertices[1][0]) == -1.0);
  CHECK(std::max(interval.vertices[0][0], interval.vertices[1][0]) == 1.0);
  CHECK(support(relay.value(0.0, vec1(0.3)), vec1(1.0)) == -1.0);

  const MultiMap hull(2, 1.0, AffineHull{{-Mat::Identity(2, 2), -Mat::Identity(2, 2)}, {vec({0, 0}), vec({1, 0})}});
  const auto hull_value = hull.value(0.0, vec({0, 0}));
  const auto& seg = std::get<Polytope>(hull_value.shape());
  REQUIRE(seg.vertices.size() == 2);
  CHECK(seg.vertices[0] == vec({0, 0}));
  CHECK(seg.vertices[1] == vec({1, 0}));
}

TEST_CASE("value rejects times outside the horizon") {
  CHECK_THROWS_AS(shrinking_ball().value(1.5, vec({0, 0})), DomainError);
  CHECK_THROWS_AS(shrinking_ball().value(-0.1, vec({0, 0})), DomainError);
}

TEST_CASE("piecewise-constant data is right-continuous") {
  LinearBall f{Mat::Zero(1, 1), PiecewiseConstant<Vec>({0.5}, {vec1(1.0), vec1(-1.0)}),
               PiecewiseConstant<double>({0.5}, {0.0, 2.0})};
  const MultiMap map(1, 1.0, f);
  CHECK(map.value(0.49, vec1(0)).center_point()[0] == 1.0);
  CHECK(map.value(0.5, vec1(0)).center_point()[0] == -1.0);
  CHECK(map.growth().mu_total() == doctest::Approx(0.5 * 1.0 + 0.5 * 3.0));
}

TEST_CASE("derive growth examples") {
  const auto g = shrinking_ball().growth();
  CHECK(g.at(0.3) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(g.mu_total() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(MultiMap(1, 2.0, Relay{1.0}).growth().mu_total() == 2.0);
  CHECK(MultiMap(2, 1.0, AffineHull{{Mat::Zero(2, 2)}, {vec({0, 0})}}).growth().mu_total() == 0.0);
}

TEST_CASE("property: sampled growth bound") {
  Gen gen(99);
  for (int family = 0; family < 20; ++family) {
    const Eigen::Index n = gen.integer(1, 3);
    std::optional<MultiMap> map;
    if (family % 2 == 0) {
      map.emplace(n, 2.0,
                  LinearBall{gen.matrix(n, -2, 2), PiecewiseConstant<Vec>({1.0}, {gen.vector(n, -1, 1), gen.vector(n, -1, 1)}),
                             PiecewiseConstant<double>({1.0}, {gen.uniform(0, 1), gen.uniform(0, 1)})});
    } else {
      map.emplace(n, 2.0, AffineHull{{gen.matrix(n, -2, 2), gen.matrix(n, -2, 2)}, {gen.vector(n, -1, 1), gen.vector(n, -1, 1)}});
    }
    for (int k = 0; k < 50; ++k) {
      const double t = gen.uniform(0, 2);
      const Vec x = gen.unit(n) * gen.uniform(0, 1000);
      const double bound = map->growth().at(t) * (1 + x.norm());
      CHECK(max_norm(map->value(t, x)) <= bound + 1e-9 * std::max(1.0, bound));
    }
  }
}

TEST_CASE("select extremal examples") {
  const Vec y = select_extremal(shrinking_ball(), 0.0, vec({2, 0}), vec({2, 0}), Extremum::min);
  CHECK(y.isApprox(vec({-2.5, 0})));
  CHECK(select_extremal(shrinking_ball(), 0.0, vec({2, 0}), vec({0, 0}), Extremum::min) == vec({-2, 0}));
  const MultiMap relay(1, 1.0, Relay{1.0});
  CHECK(select_extremal(relay, 0.0, vec1(0.0), vec1(1.0), Extremum::max) == vec1(1.0));
  CHECK(select_extremal(relay, 0.0, vec1(0.0), vec1(1.0), Extremum::min) == vec1(-1.0));
}

TEST_CASE("select filtered examples") {
  auto y = select_filtered(shrinking_ball(), half_sq2, 0.0, vec({2, 0}), -1, 1.0);
  REQUIRE(y.has_value());
  CHECK(y->isApprox(vec({-2.5, 0})));
  CHECK(vec({2, 0}).dot(*y) == doctest::Approx(-5.0));

  const auto growing = linear_ball(scalar_matrix(2, 1), vec({0, 0}), 0.0, 1.0);
  CHECK_FALSE(select_filtered(growing, half_sq2, 0.0, vec({2, 0}), -1, 1.0).has_value());
  CHECK(select_filtered(growing, half_sq2, 0.0, vec({0.5, 0}), -1, 1.0).has_value());
}

TEST_CASE("property: filtered selections are admissible and respect the half-space") {
  Gen gen(5);
  const Potential V = Potential::half_norm_squared(2);
  for (int trial = 0; trial < 300; ++trial) {
    const auto map = linear_ball(gen.matrix(2, -2, 2), gen.vector(2, -1, 1), gen.uniform(0, 1), 1.0);
    const Vec x = gen.vector(2, -5, 5);
    const int sign = gen.integer(0, 1) ? 1 : -1;
    const double R = gen.uniform(0.1, 3);
    const auto y = select_filtered(map, V, 0.3, x, sign, R);
    if (x.norm() <= R) CHECK(y.has_value());
    if (!y) continue;
    CHECK(distance_to(map.value(0.3, x), *y) <= 1e-10);
    if (x.norm() > R) CHECK(sign * V.gradient(x).dot(*y) >= -1e-10);
  }
}

TEST_CASE("homotopy value examples") {
  const MultiMap map = shrinking_ball();
  const Vec x = vec({2, 0});
  const HomotopyField at_one{map, half_sq2, -1, 1.0};
  CHECK(*homotopy_value(at_one, 0.0, x, 1.0) == -field_wv(half_sq2, x));
  const HomotopyField at_zero{map, half_sq2, -1, 0.0};
  CHECK(*homotopy_value(at_zero, 0.0, x, 1.0) == *select_filtered(map, half_sq2, 0.0, x, -1, 1.0));
  const HomotopyField half{map, half_sq2, -1, 0.5};
  CHECK(homotopy_value(half, 0.0, x, 1.0)->isApprox(vec({-1.75, 0})));

  const auto growing = linear_ball(scalar_matrix(2, 1), vec({0, 0}), 0.0, 1.0);
  const HomotopyField empty{growing, half_sq2, -1, 0.5};
  CHECK_FALSE(homotopy_value(empty, 0.0, x, 1.0).has_value());
}

TEST_CASE("property: homotopy value is affine in lambda") {
  Gen gen(17);
  const MultiMap map = shrinking_ball();
  for (int trial = 0; trial < 100; ++trial) {
    const Vec x = gen.vector(2, -4, 4);
    const Vec a = -field_wv(half_sq2, x);
    const Vec b = *select_filtered(map, half_sq2, 0.0, x, -1, 0.7);
    const double lambda = gen.uniform(0, 1);
    const HomotopyField h{map, half_sq2, -1, lambda};
    const Vec expected = lambda * a + (1 - lambda) * b;
    CHECK((*homotopy_value(h, 0.0, x, 0.7) - expected).norm() <= 1e-15 * (1 + expected.norm()));
  }
}

TEST_CASE("time reversal negates and mirrors") {
  LinearBall f{Mat::Zero(1, 1), PiecewiseConstant<Vec>({0.25}, {vec1(1.0), vec1(3.0)}), PiecewiseConstant<double>(0.0)};
  const MultiMap map(1, 1.0, f);
  const MultiMap rev = map.time_reversed();
  CHECK(rev.value(0.1, vec1(0)).center_point()[0] == -3.0);
  CHECK(rev.value(0.9, vec1(0)).center_point()[0] == -1.0);
  CHECK(rev.growth().mu_total() == doctest::Approx(map.growth().mu_total()));
  CHECK(rev.growth().at(0.9) == map.growth().at(0.1));
}

TEST_CASE("construction contracts") {
  CHECK_THROWS_AS(MultiMap(2, 1.0, Relay{1.0}), ConfigError);
  CHECK_THROWS_AS(MultiMap(1, 1.0, Relay{-1.0}), ConfigError);
  CHECK_THROWS_AS(MultiMap(1, 0.0, Relay{1.0}), ConfigError);
  CHECK_THROWS_AS(linear_ball(scalar_matrix(2, 1), vec({0, 0}), -0.5, 1.0), ConfigError);
}
