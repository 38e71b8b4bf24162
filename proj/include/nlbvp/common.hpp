#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace nlbvp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Error hierarchy. Signal values (empty filtered selections, undefined radii)
// are returned through std::optional, never thrown.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (t outside [0,T],
// malformed set data, negative radius).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Inconsistent or degenerate configuration (grids, constructor contracts).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A boundary functional needs a node the time grid does not contain.
class GridError : public Error {
 public:
  using Error::Error;
};

// The field vanishes (numerically) on the boundary of a degree domain.
class DegenerateDomainError : public Error {
 public:
  using Error::Error;
};

// Refinement budget exhausted before the degree could be resolved.
class InconclusiveError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Filtered selection came back empty: the guiding inequality fails at (t, x).
class GuidingViolation : public Error {
 public:
  GuidingViolation(double t, Vec x, double lambda);
  double time() const { return t_; }
  const Vec& state() const { return x_; }
  double lambda() const { return lambda_; }

 private:
  double t_;
  Vec x_;
  double lambda_;
};

// Deterministic generator with platform-independent real mappings, so seeded
// runs reproduce bit-for-bit regardless of the standard library in use.
/// Seeded random source (std::mt19937_64) shared by samplers and strategies.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  double normal();
  Vec normal_vec(Eigen::Index n);
  Vec unit_vec(Eigen::Index n);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

std::string format_vec(const Vec& v);

}  // namespace nlbvp
