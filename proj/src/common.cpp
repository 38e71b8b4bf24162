#include "nlbvp/common.hpp"

#include <cmath>
#include <cstdio>

namespace nlbvp {

GuidingViolation::GuidingViolation(double t, Vec x, double lambda)
    : Error("guiding hypothesis violated: filtered selection is empty at t=" +
            std::to_string(t) + ", x=" + format_vec(x)),
      t_(t),
      x_(std::move(x)),
      lambda_(lambda) {}

double Rng::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() { return normal_(engine_); }

Vec Rng::normal_vec(Eigen::Index n) {
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
  return v;
}

Vec Rng::unit_vec(Eigen::Index n) {
  for (;;) {
    Vec v = normal_vec(n);
    const double len = v.norm();
    if (len > 1e-12) return v / len;
  }
}

std::string format_vec(const Vec& v) {
  std::string out = "(";
  char buf[40];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.10g", v[i]);
    if (i > 0) out += ", ";
    out += buf;
  }
  return out + ")";
}

}  // namespace nlbvp
