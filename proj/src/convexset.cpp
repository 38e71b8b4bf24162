#include "nlbvp/convexset.hpp"

#include <algorithm>
#include <cmath>

namespace nlbvp {

namespace {

constexpr double kProjectionTol = 1e-10;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_finite(const Vec& v, const char* what) {
  if (v.size() == 0) throw DomainError(std::string(what) + ": empty vector");
  if (!v.allFinite()) throw DomainError(std::string(what) + ": non-finite coordinate");
}

double segment_distance(const Vec& a, const Vec& b, const Vec& p) {
  const Vec ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double s = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

// Wolfe's minimum-norm-point algorithm on the translated points q_i = v_i - p.
double polytope_distance(const std::vector<Vec>& vertices, const Vec& p) {
  const std::size_t m = vertices.size();
  std::vector<Vec> q;
  q.reserve(m);
  double scale = 0.0;
  for (const auto& v : vertices) {
    q.push_back(v - p);
    scale = std::max(scale, q.back().squaredNorm());
  }
  if (scale == 0.0) return 0.0;

  std::size_t first = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (q[i].squaredNorm() < q[first].squaredNorm()) first = i;

  std::vector<std::size_t> active{first};
  std::vector<double> weights{1.0};
  Vec x = q[first];

  for (int major = 0; major < 1000; ++major) {
    std::size_t best = 0;
    double best_dot = x.dot(q[0]);
    for (std::size_t j = 1; j < m; ++j) {
      const double d = x.dot(q[j]);
      if (d < best_dot) {
        best_dot = d;
        best = j;
      }
    }
    if (x.squaredNorm() - best_dot <= kProjectionTol * kProjectionTol * scale ||
        std::find(active.begin(), active.end(), best) != active.end()) {
      break;
    }
    active.push_back(best);
    weights.push_back(0.0);

    for (int minor = 0; minor < 1000; ++minor) {
      const auto k = static_cast<Eigen::Index>(active.size());
      Mat system = Mat::Zero(k + 1, k + 1);
      Vec rhs = Vec::Zero(k + 1);
      for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b)
          system(a, b) = q[active[static_cast<std::size_t>(a)]].dot(q[active[static_cast<std::size_t>(b)]]);
        system(a, k) = 1.0;
        system(k, a) = 1.0;
      }
      rhs[k] = 1.0;
      const Vec sol = system.completeOrthogonalDecomposition().solve(rhs);
      const Vec alpha = sol.head(k);

      if ((alpha.array() > 1e-14).all()) {
        for (Eigen::Index a = 0; a < k; ++a) weights[static_cast<std::size_t>(a)] = alpha[a];
        break;
      }
      double theta = 1.0;
      for (Eigen::Index a = 0; a < k; ++a) {
        const double w = weights[static_cast<std::size_t>(a)];
        if (alpha[a] <= 1e-14 && w - alpha[a] > 0.0) theta = std::min(theta, w / (w - alpha[a]));
      }
      for (Eigen::Index a = 0; a < k; ++a) {
        auto& w = weights[static_cast<std::size_t>(a)];
        w = w + theta * (alpha[a] - w);
      }
      std::vector<std::size_t> kept;
      std::vector<double> kept_w;
      for (std::size_t a = 0; a < active.size(); ++a) {
        if (weights[a] > 1e-14) {
          kept.push_back(active[a]);
          kept_w.push_back(weights[a]);
        }
      }
      if (kept.empty()) {
        kept.push_back(active.back());
        kept_w.push_back(1.0);
      }
      active = std::move(kept);
      weights = std::move(kept_w);
    }
    double total = 0.0;
    for (double w : weights) total += w;
    x = Vec::Zero(p.size());
    for (std::size_t a = 0; a < active.size(); ++a) x += (weights[a] / total) * q[active[a]];
  }
  return x.norm();
}

}  // namespace

ConvexSet ConvexSet::ball(Vec center, double radius) {
  require_finite(center, "ball center");
  if (!std::isfinite(radius) || radius < 0.0) throw DomainError("ball radius must be finite and >= 0");
  return ConvexSet(Ball{std::move(center), radius});
}

ConvexSet ConvexSet::polytope(std::vector<Vec> vertices) {
  if (vertices.empty()) throw DomainError("polytope needs at least one vertex");
  for (const auto& v : vertices) {
    require_finite(v, "polytope vertex");
    if (v.size() != vertices.front().size()) throw DomainError("polytope vertices of mixed dimension");
  }
  return ConvexSet(Polytope{std::move(vertices)});
}

ConvexSet ConvexSet::singleton(Vec point) {
  require_finite(point, "singleton point");
  return ConvexSet(Singleton{std::move(point)});
}

Eigen::Index ConvexSet::dimension() const {
  return std::visit(overloaded{[](const Ball& b) { return b.center.size(); },
                               [](const Polytope& p) { return p.vertices.front().size(); },
                               [](const Singleton& s) { return s.point.size(); }},
                    shape_);
}

ConvexSet ConvexSet::negated() const {
  return std::visit(overloaded{[](const Ball& b) { return ConvexSet(Ball{-b.center, b.radius}); },
                               [](const Polytope& p) {
                                 std::vector<Vec> vs;
                                 vs.reserve(p.vertices.size());
                                 for (const auto& v : p.vertices) vs.push_back(-v);
                                 return ConvexSet(Polytope{std::move(vs)});
                               },
                               [](const Singleton& s) { return ConvexSet(Singleton{-s.point}); }},
                    shape_);
}

Vec ConvexSet::center_point() const {
  return std::visit(overloaded{[](const Ball& b) -> Vec { return b.center; },
                               [](const Polytope& p) -> Vec {
                                 Vec sum = Vec::Zero(p.vertices.front().size());
                                 for (const auto& v : p.vertices) sum += v;
                                 return sum / static_cast<double>(p.vertices.size());
                               },
                               [](const Singleton& s) -> Vec { return s.point; }},
                    shape_);
}

double support(const ConvexSet& set, const Vec& v) {
  return std::visit(overloaded{[&](const Ball& b) { return v.dot(b.center) + b.radius * v.norm(); },
                               [&](const Polytope& p) {
                                 double best = v.dot(p.vertices.front());
                                 for (const auto& x : p.vertices) best = std::max(best, v.dot(x));
                                 return best;
                               },
                               [&](const Singleton& s) { return v.dot(s.point); }},
                    set.shape());
}

InnerRange inner_product_range(const ConvexSet& set, const Vec& v) {
  return {-support(set, -v), support(set, v)};
}

bool lexicographically_less(const Vec& a, const Vec& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

Vec extreme_point(const ConvexSet& set, const Vec& v) {
  return std::visit(overloaded{[&](const Ball& b) -> Vec {
                                 const double len = v.norm();
                                 if (len == 0.0) return b.center;
                                 return b.center + (b.radius / len) * v;
                               },
                               [&](const Polytope& p) -> Vec {
                                 if (v.isZero(0.0)) return p.vertices.front();
                                 const Vec* best = &p.vertices.front();
                                 double best_val = v.dot(*best);
                                 for (const auto& x : p.vertices) {
                                   const double val = v.dot(x);
                                   if (val > best_val || (val == best_val && lexicographically_less(x, *best))) {
                                     best = &x;
                                     best_val = val;
                                   }
                                 }
                                 return *best;
                               },
                               [](const Singleton& s) -> Vec { return s.point; }},
                    set.shape());
}

double distance_to(const ConvexSet& set, const Vec& p) {
  return std::visit(overloaded{[&](const Ball& b) { return std::max(0.0, (p - b.center).norm() - b.radius); },
                               [&](const Polytope& poly) {
                                 const auto& vs = poly.vertices;
                                 if (vs.size() == 1) return (p - vs.front()).norm();
                                 if (vs.size() == 2) return segment_distance(vs[0], vs[1], p);
                                 return polytope_distance(vs, p);
                               },
                               [&](const Singleton& s) { return (p - s.point).norm(); }},
                    set.shape());
}

double max_norm(const ConvexSet& set) {
  return std::visit(overloaded{[](const Ball& b) { return b.center.norm() + b.radius; },
                               [](const Polytope& p) {
                                 double best = 0.0;
                                 for (const auto& x : p.vertices) best = std::max(best, x.norm());
                                 return best;
                               },
                               [](const Singleton& s) { return s.point.norm(); }},
                    set.shape());
}

}  // namespace nlbvp
