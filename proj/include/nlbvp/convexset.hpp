#pragma once

#include "nlbvp/common.hpp"

#include <variant>
#include <vector>

namespace nlbvp {

struct Ball {
  Vec center;
  double radius;
};

struct Polytope {
  std::vector<Vec> vertices;
};

struct Singleton {
  Vec point;
};

/// Compact convex subset of R^N. Immutable once built; construction rejects
/// negative radii, empty vertex lists, mixed dimensions and non-finite data.
class ConvexSet {
 public:
  using Shape = std::variant<Ball, Polytope, Singleton>;

  static ConvexSet ball(Vec center, double radius);
  static ConvexSet polytope(std::vector<Vec> vertices);
  static ConvexSet singleton(Vec point);

  const Shape& shape() const { return shape_; }
  Eigen::Index dimension() const;

  /// The set {-a : a in A}.
  ConvexSet negated() const;

  /// Ball center, polytope vertex mean, or the singleton point.
  Vec center_point() const;

 private:
  explicit ConvexSet(Shape shape) : shape_(std::move(shape)) {}
  Shape shape_;
};

struct InnerRange {
  double lower;
  double upper;
};

/// sup{<v,a> : a in A}
double support(const ConvexSet& set, const Vec& v);

/// (<v,A>^-, <v,A>^+), the lower and upper inner products of {v} and A.
InnerRange inner_product_range(const ConvexSet& set, const Vec& v);

/// Element of A attaining support(A, v). Balls return c + r v/|v|; polytopes
/// return the maximizing vertex with ties broken towards the lexicographically
/// smallest vertex. A zero direction yields the center or the first vertex.
Vec extreme_point(const ConvexSet& set, const Vec& v);

/// Euclidean distance from p to the set; zero exactly on membership for balls.
/// Polytopes with more than two vertices use Wolfe's minimum-norm-point
/// iteration, converged to 1e-10.
double distance_to(const ConvexSet& set, const Vec& p);

/// sup{|a| : a in A}.
double max_norm(const ConvexSet& set);

bool lexicographically_less(const Vec& a, const Vec& b);

}  // namespace nlbvp
