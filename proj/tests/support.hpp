#pragma once

#include "nlbvp/multimap.hpp"

#include <initializer_list>
#include <random>

namespace testing_support {

using nlbvp::Mat;
using nlbvp::Vec;

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Vec vec1(double x) { return Vec::Constant(1, x); }

inline Mat scalar_matrix(Eigen::Index n, double a) { return a * Mat::Identity(n, n); }

// Time-invariant x' in A x + b + B(0, rho).
inline nlbvp::MultiMap linear_ball(const Mat& A, const Vec& b, double rho, double T) {
  nlbvp::LinearBall f{A, nlbvp::PiecewiseConstant<Vec>(b), nlbvp::PiecewiseConstant<double>(rho)};
  return nlbvp::MultiMap(A.rows(), T, f);
}

// Hand-rolled generators for property tests; independent of the library RNG.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  Vec vector(Eigen::Index n, double lo, double hi) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }
  Mat matrix(Eigen::Index n, double lo, double hi) {
    Mat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = uniform(lo, hi);
    return m;
  }
  Vec unit(Eigen::Index n) {
    Vec v;
    do {
      v = Vec(n);
      for (Eigen::Index i = 0; i < n; ++i) v[i] = std::normal_distribution<double>()(eng_);
    } while (v.norm() < 1e-6);
    return v / v.norm();
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace testing_support
