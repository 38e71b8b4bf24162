#include "nlbvp/convexset.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace nlbvp;
using testing_support::Gen;
using testing_support::vec;

namespace {

// Dense sample of the boundary circle of a 2-D ball: sup of <v, a>.
double sampled_ball_support(const Vec& c, double r, const Vec& v) {
  double best = -INFINITY;
  for (int k = 0; k < 200000; ++k) {
    const double th = 2.0 * std::numbers::pi * k / 200000;
    best = std::max(best, v.dot(c + r * vec({std::cos(th), std::sin(th)})));
  }
  return best;
}

ConvexSet random_set(Gen& gen, Eigen::Index n) {
  switch (gen.integer(0, 2)) {
    case 0: return ConvexSet::ball(gen.vector(n, -3, 3), gen.uniform(0, 2));
    case 1: {
      std::vector<Vec> vs;
      const int m = gen.integer(1, 6);
      for (int i = 0; i < m; ++i) vs.push_back(gen.vector(n, -3, 3));
      return ConvexSet::polytope(vs);
    }
    default: return ConvexSet::singleton(gen.vector(n, -3, 3));
  }
}

}  // namespace

TEST_CASE("support examples") {
  CHECK(support(ConvexSet::ball(vec({0, 0}), 1), vec({1, 0})) == doctest::Approx(1.0));
  CHECK(support(ConvexSet::polytope({vec({1, 0}), vec({0, 1})}), vec({1, 1})) == doctest::Approx(1.0));
  const double s = support(ConvexSet::ball(vec({-2, 0}), 0.5), vec({2, 0}));
  CHECK(s == doctest::Approx(-3.0).epsilon(1e-14));
  CHECK(s == doctest::Approx(sampled_ball_support(vec({-2, 0}), 0.5, vec({2, 0}))).epsilon(1e-9));
}

TEST_CASE("inner product range examples") {
  auto r = inner_product_range(ConvexSet::ball(vec({0, 0}), 1), vec({1, 0}));
  CHECK(r.lower == doctest::Approx(-1));
  CHECK(r.upper == doctest::Approx(1));
  r = inner_product_range(ConvexSet::ball(vec({-2, 0}), 0.5), vec({2, 0}));
  CHECK(r.lower == doctest::Approx(-5));
  CHECK(r.upper == doctest::Approx(-3));
  // F = -x + B(1/2) at x = (2,0): -|x|^2 -+ r|x|
  const Vec x = vec({2, 0});
  CHECK(r.lower == doctest::Approx(-x.squaredNorm() - 0.5 * x.norm()));
  r = inner_product_range(ConvexSet::singleton(vec({3, 4})), vec({1, 0}));
  CHECK(r.lower == 3.0);
  CHECK(r.upper == 3.0);
}

TEST_CASE("extreme point examples") {
  CHECK(extreme_point(ConvexSet::ball(vec({0, 0}), 1), vec({0, 2})).isApprox(vec({0, 1})));
  CHECK(extreme_point(ConvexSet::polytope({vec({1, 0}), vec({0, 1})}), vec({0, 1})) == vec({0, 1}));
  CHECK(extreme_point(ConvexSet::ball(vec({0, 0}), 1), vec({0, 0})) == vec({0, 0}));
}

TEST_CASE("extreme point ties go to the lexicographically smallest vertex") {
  const auto p = ConvexSet::polytope({vec({1, 1}), vec({0, 1}), vec({0.5, 1})});
  CHECK(extreme_point(p, vec({0, 1})) == vec({0, 1}));
  CHECK(extreme_point(p, vec({0, 0})) == vec({1, 1}));
}

TEST_CASE("distance examples") {
  CHECK(distance_to(ConvexSet::ball(vec({0, 0}), 1), vec({2, 0})) == doctest::Approx(1));
  CHECK(distance_to(ConvexSet::ball(vec({0, 0}), 1), vec({0.5, 0})) == 0.0);
  const auto seg = ConvexSet::polytope({vec({0, 0}), vec({2, 0})});
  const double d = distance_to(seg, vec({1, 1}));
  double oracle = INFINITY;
  for (int k = 0; k <= 100000; ++k) {
    const double s = k / 100000.0;
    oracle = std::min(oracle, (vec({1, 1}) - s * vec({2, 0})).norm());
  }
  CHECK(d == doctest::Approx(1.0));
  CHECK(d == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("distance to a triangle matches dense convex-combination search") {
  const auto tri = ConvexSet::polytope({vec({0, 0}), vec({1, 0}), vec({0, 1})});
  for (const Vec& p : {vec({1, 1}), vec({-1, -1}), vec({0.2, 0.2}), vec({2, -0.5})}) {
    double oracle = INFINITY;
    for (int i = 0; i <= 400; ++i)
      for (int j = 0; i + j <= 400; ++j)
        oracle = std::min(oracle, (p - vec({i / 400.0, j / 400.0})).norm());
    CHECK(distance_to(tri, p) == doctest::Approx(oracle).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("singleton agrees with degenerate ball and polytope") {
  Gen gen(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec p = gen.vector(3, -5, 5);
    const Vec v = gen.vector(3, -5, 5);
    const auto s = ConvexSet::singleton(p);
    const auto b = ConvexSet::ball(p, 0.0);
    const auto q = ConvexSet::polytope({p});
    CHECK(support(s, v) == doctest::Approx(support(b, v)));
    CHECK(support(s, v) == doctest::Approx(support(q, v)));
    CHECK(extreme_point(s, v).isApprox(extreme_point(b, v)));
    CHECK(extreme_point(s, v) == extreme_point(q, v));
    CHECK(distance_to(s, v) == doctest::Approx(distance_to(b, v)));
    CHECK(distance_to(s, v) == doctest::Approx(distance_to(q, v)));
  }
}

TEST_CASE("property: range ordering, duality and homogeneity") {
  Gen gen(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index n = gen.integer(1, 4);
    const auto a = random_set(gen, n);
    const Vec v = gen.vector(n, -4, 4);
    const auto r = inner_product_range(a, v);
    CHECK(r.lower <= r.upper);
    CHECK(r.lower == doctest::Approx(-inner_product_range(a, -v).upper));
    const double s = gen.uniform(0.01, 10);
    CHECK(support(a, s * v) == doctest::Approx(s * support(a, v)).epsilon(1e-12));
  }
}

TEST_CASE("property: extreme points lie in the set and attain the support") {
  Gen gen(7);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index n = gen.integer(1, 4);
    const auto a = random_set(gen, n);
    const Vec v = gen.vector(n, -4, 4);
    const Vec e = extreme_point(a, v);
    CHECK(distance_to(a, e) <= 1e-10);
    CHECK(std::abs(v.dot(e) - support(a, v)) <= 1e-10 * std::max(1.0, std::abs(support(a, v))));
  }
}

TEST_CASE("construction rejects invalid data") {
  CHECK_THROWS_AS(ConvexSet::ball(vec({0, 0}), -1), DomainError);
  CHECK_THROWS_AS(ConvexSet::polytope({}), DomainError);
  CHECK_THROWS_AS(ConvexSet::polytope({vec({0, 0}), vec({1})}), DomainError);
  CHECK_THROWS_AS(ConvexSet::singleton(vec({NAN})), DomainError);
}
