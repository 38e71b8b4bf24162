#pragma once

#include "nlbvp/common.hpp"
#include "nlbvp/degree.hpp"
#include "nlbvp/ivp.hpp"
#include "nlbvp/potential.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nlbvp {

/// g(x) = -x(T)
struct AntiPeriodic {
  bool operator==(const AntiPeriodic&) const = default;
};

/// g(x) = sum_i alpha_i x(t_i), with sum|alpha_i| <= 1 and sum alpha_i != 1.
struct MultiPoint {
  std::vector<double> alphas;
  std::vector<double> times;
  bool operator==(const MultiPoint&) const = default;
};

struct LinearMap {
  Mat C;
  bool operator==(const LinearMap& o) const {
    return C.rows() == o.C.rows() && C.cols() == o.C.cols() && C == o.C;
  }
};

/// h(x) = s x, s in [0, 1].
struct RadialClamp {
  double scale;
  bool operator==(const RadialClamp&) const = default;
};

/// g(x) = (1/T) ∫ h(x(t)) dt, |h(x)| <= |x|.
struct MeanValue {
  std::variant<LinearMap, RadialClamp> h;
  bool operator==(const MeanValue&) const = default;
};

/// g(x) = sum_i A_i x(t_i) + v, t_i in [0, T].
struct AffineEval {
  std::vector<Mat> matrices;
  std::vector<double> times;
  Vec offset;
  bool operator==(const AffineEval& o) const;
};

using BoundaryKind = std::variant<AntiPeriodic, MultiPoint, MeanValue, AffineEval>;

/// initial: x(0) = g(x); terminal: x(T) = g(x).
enum class Side { initial, terminal };

class BoundaryFunctional {
 public:
  BoundaryFunctional(Eigen::Index dimension, double horizon, BoundaryKind kind, Side side = Side::initial);

  Eigen::Index dimension() const { return dimension_; }
  double horizon() const { return horizon_; }
  const BoundaryKind& kind() const { return kind_; }
  Side side() const { return side_; }

  /// Times at which apply() reads the trajectory. For terminal conditions the
  /// solver integrates in reversed time s = T - t and these are s-values.
  std::vector<double> evaluation_times() const;

  /// g applied to a trajectory in working time (reversed for terminal side).
  Vec apply(const Trajectory& traj) const;

  /// g(i(x0)), the functional on the constant trajectory x ≡ x0.
  Vec apply_constant(const Vec& x0) const;

 private:
  double working_time(double t) const { return side_ == Side::terminal ? horizon_ - t : t; }

  Eigen::Index dimension_;
  double horizon_;
  BoundaryKind kind_;
  Side side_;
};

/// |g(x)| <= c ||x|| + d
struct GrowthEstimate {
  double c = 0.0;
  double d = 0.0;
};

GrowthEstimate apply_growth(const BoundaryFunctional& g);

struct ConditionResult {
  enum class Status { pass, fail, not_tested };
  Status status = Status::not_tested;
  std::size_t tested = 0;
  std::string detail;
  std::optional<Vec> witness;
  double worst = 0.0;
};

const char* to_string(ConditionResult::Status s);

struct Th4Report {
  double level = 0.0;
  ConditionResult i;    // exists t in (0,T]: |g(x)| <= |x(t)|, on candidates
  ConditionResult ii;   // |g(i(x0))| <= |x0| on V^{-1}(r)
  ConditionResult iii;  // x0 != g(i(x0)) on V^{-1}(r)
};

/// Samples the level set V^{-1}(cert.r) in `sphere_samples`-per-side
/// directions for (ii) and (iii); (i) is checked only on candidate
/// trajectories with |x(0) - g(x)| <= candidate_tol.
Th4Report check_th4_conditions(const BoundaryFunctional& g, const Potential& potential, const GuidingCertificate& cert,
                               const std::vector<Trajectory>& candidates, int sphere_samples = 0,
                               double candidate_tol = 1e-6);

struct Th6Report {
  ConditionResult a;  // sampled liminf |g(x)|/||x|| > 1
  ConditionResult b;  // deg(g∘i, B(R), 0) != 0
  double liminf_estimate = 0.0;
  std::string family;
  std::optional<DegreeResult> degree;
  double degree_radius = 0.0;
};

/// (a) is a sampled surrogate over constants, random paths and bumps that
/// vanish at every evaluation time of g, at sup-norms 1e2, 1e3, 1e4. (b)
/// searches radii 1, 2, 4, ... for a sphere where g∘i has no sampled zero and
/// computes the degree there. Inconclusive degrees propagate.
Th6Report check_th6_conditions(const BoundaryFunctional& g, int grid_steps = 200, int random_paths = 8,
                               std::uint64_t seed = 0, int degree_depth = 6);

}  // namespace nlbvp
