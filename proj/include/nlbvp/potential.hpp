#pragma once

#include "nlbvp/common.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace nlbvp {

class MultiMap;

/// V(x) = phi(|x|^2 / 2) with phi(u) = sum_i coeffs[i] u^i.
struct Radial {
  std::vector<double> coeffs;
  bool operator==(const Radial&) const = default;
};

/// V(x) = <x, A x> / 2 with A symmetric.
struct Quadratic {
  Mat A;
  bool operator==(const Quadratic& o) const {
    return A.rows() == o.A.rows() && A.cols() == o.A.cols() && A == o.A;
  }
};

using PotentialFamily = std::variant<Radial, Quadratic>;

class Potential {
 public:
  Potential(Eigen::Index dimension, PotentialFamily family);

  static Potential half_norm_squared(Eigen::Index dimension);

  Eigen::Index dimension() const { return dimension_; }
  const PotentialFamily& family() const { return family_; }

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;

  bool operator==(const Potential&) const = default;

 private:
  Eigen::Index dimension_;
  PotentialFamily family_;
};

/// grad V clipped to the closed unit ball: grad V when |grad V| <= 1, else
/// grad V / |grad V|.
Vec field_wv(const Potential& potential, const Vec& x);

enum class Guiding { weak_positive, weak_negative, strict_negative, none };

const char* to_string(Guiding g);

struct GuidingGrid {
  double R_max = 10.0;
  int radial_steps = 100;
  int directions_per_side = 0;  // 0 picks a default per dimension
  int time_steps = 8;
};

/// Result of grid-sampled verification of the guiding hypotheses. Sound only
/// at the sampled points; `sample_resolution` and `R_max` bound the claim.
struct GuidingCertificate {
  double R = 0.0;
  double r = 0.0;
  Guiding classification = Guiding::none;
  bool weak_positive = false;
  bool weak_negative = false;
  bool strict_negative = false;
  double R_weak_positive = 0.0;
  double R_weak_negative = 0.0;
  double R_strict_negative = 0.0;
  double sample_resolution = 0.0;
  double R_max = 0.0;
  std::size_t points_tested = 0;
};

GuidingCertificate classify_guiding(const Potential& potential, const MultiMap& map, const GuidingGrid& grid);

/// Deterministic sample directions on the unit sphere: boundary points of the
/// cube [-1,1]^N lattice with `per_side` cells, normalized.
std::vector<Vec> sphere_directions(Eigen::Index dimension, int per_side);
int default_directions_per_side(Eigen::Index dimension);

struct MonotoneCheck {
  bool pass = true;
  // (x, y) with |x| <= |y| and V(x) > V(y).
  std::optional<std::pair<Vec, Vec>> witness;
};

MonotoneCheck check_monotone(const Potential& potential, int samples, std::uint64_t seed, double R_max = 10.0);

bool check_coercive(const Potential& potential);

/// rho* with V(x) > r whenever |x| > rho*. Throws ConfigError when V is not
/// coercive or r <= V(0).
double sublevel_ball_radius(const Potential& potential, double r);

/// Largest s >= 0 with V(s e) = r along the unit direction e (coercive V).
double level_set_radius(const Potential& potential, const Vec& direction, double r);

namespace poly {
double eval(const std::vector<double>& c, double u);
std::vector<double> derivative(const std::vector<double>& c);
/// Real roots (ascending) from the companion-matrix eigenvalues, polished by
/// Newton steps.
std::vector<double> real_roots(const std::vector<double>& c);
}  // namespace poly

}  // namespace nlbvp
