#pragma once

#include "nlbvp/common.hpp"
#include "nlbvp/convexset.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace nlbvp {

class Potential;

/// Right-continuous piecewise-constant function on [0, T]: values[i] holds on
/// [breakpoints[i-1], breakpoints[i]), the last value extends to T inclusive.
template <class T>
struct PiecewiseConstant {
  std::vector<double> breakpoints;  // interior, strictly increasing, in (0, T)
  std::vector<T> values;            // breakpoints.size() + 1 entries

  PiecewiseConstant() = default;
  explicit PiecewiseConstant(T constant) : values{std::move(constant)} {}
  PiecewiseConstant(std::vector<double> breaks, std::vector<T> vals)
      : breakpoints(std::move(breaks)), values(std::move(vals)) {}

  std::size_t segment(double t) const {
    std::size_t i = 0;
    while (i < breakpoints.size() && t >= breakpoints[i]) ++i;
    return i;
  }
  const T& at(double t) const { return values[segment(t)]; }
  bool operator==(const PiecewiseConstant&) const = default;
};

/// Integrable growth datum mu(t): sup|F(t,x)| <= mu(t)(1+|x|).
class GrowthProfile {
 public:
  GrowthProfile(double horizon, PiecewiseConstant<double> mu);

  double horizon() const { return horizon_; }
  const PiecewiseConstant<double>& mu() const { return mu_; }
  double at(double t) const { return mu_.at(t); }
  /// Exact integral of mu over [0, t].
  double integral_to(double t) const;
  /// ||mu||_1 over [0, T].
  double mu_total() const { return integral_to(horizon_); }
  double sup() const;
  /// Profile of s -> mu(T - s).
  GrowthProfile reversed() const;

 private:
  double horizon_;
  PiecewiseConstant<double> mu_;
};

/// F(t,x) = A x + b(t) + Ball(0, rho(t)).
struct LinearBall {
  Mat A;
  PiecewiseConstant<Vec> b;
  PiecewiseConstant<double> rho;
  bool operator==(const LinearBall& o) const;
};

/// F(t,x) = conv{A_j x + b_j}.
struct AffineHull {
  std::vector<Mat> A;
  std::vector<Vec> b;
  bool operator==(const AffineHull& o) const;
};

/// Filippov-convexified relay, N = 1: {-k sgn x}, and [-k, k] at x = 0.
struct Relay {
  double k;
  bool operator==(const Relay&) const = default;
};

using MapFamily = std::variant<LinearBall, AffineHull, Relay>;

/// Caratheodory right-hand side. A time-reversed map evaluates
/// s -> -F(T - s, y), the backward problem used for terminal conditions.
class MultiMap {
 public:
  MultiMap(Eigen::Index dimension, double horizon, MapFamily family);

  Eigen::Index dimension() const { return dimension_; }
  double horizon() const { return horizon_; }
  const MapFamily& family() const { return family_; }
  bool is_time_reversed() const { return reversed_; }
  bool is_relay() const { return std::holds_alternative<Relay>(family_); }
  const GrowthProfile& growth() const { return growth_; }

  /// F(t, x). Throws DomainError for t outside [0, T].
  ConvexSet value(double t, const Vec& x) const;

  MultiMap time_reversed() const;

 private:
  Eigen::Index dimension_;
  double horizon_;
  MapFamily family_;
  bool reversed_ = false;
  GrowthProfile growth_;
};

GrowthProfile derive_growth(const MultiMap& map);

enum class Extremum { min, max };

/// Element of F(t,x) minimizing or maximizing <direction, y>.
Vec select_extremal(const MultiMap& map, double t, const Vec& x, const Vec& direction, Extremum mode);

/// Extremal selection of F_V(t,x) = F(t,x) ∩ {y : sign <grad V(x), y> >= 0}.
/// Inside |x| <= R the half-space constraint is switched off. Returns
/// std::nullopt when the half-space misses F(t,x), i.e. the guiding inequality
/// fails at (t, x).
std::optional<Vec> select_filtered(const MultiMap& map, const Potential& potential, double t, const Vec& x,
                                   int sign, double R);

/// G(t,x,lambda) = lambda (sign W_V)(x) + (1-lambda) F_V(t,x) at the filtered
/// selection.
struct HomotopyField {
  const MultiMap& base;
  const Potential& potential;
  int sign;
  double lambda;
};

std::optional<Vec> homotopy_value(const HomotopyField& field, double t, const Vec& x, double R);

}  // namespace nlbvp
