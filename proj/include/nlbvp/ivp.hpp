#pragma once

#include "nlbvp/common.hpp"
#include "nlbvp/multimap.hpp"
#include "nlbvp/potential.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nlbvp {

/// Nodes t_k = kT/n on [0, T], augmented so that every required time is a
/// node exactly (nodes within 1e-12 T of a required time are snapped to it).
class TimeGrid {
 public:
  TimeGrid(double horizon, int steps, std::span<const double> required_times = {});

  double horizon() const { return horizon_; }
  int base_steps() const { return base_steps_; }
  std::size_t intervals() const { return nodes_.size() - 1; }
  const std::vector<double>& nodes() const { return nodes_; }
  double step(std::size_t k) const { return nodes_[k + 1] - nodes_[k]; }
  double max_step() const;
  std::optional<std::size_t> index_of(double t) const;

 private:
  double horizon_;
  int base_steps_;
  std::vector<double> nodes_;
};

/// Explicit-Euler trajectory: states at every node, one selection per
/// interval, x_{k+1} = x_k + dt_k f_k.
struct Trajectory {
  TimeGrid grid;
  std::vector<Vec> states;
  std::vector<Vec> selections;
  // Steps where relay sliding clamped the state onto x = 0; their selection
  // lies in F(t_k, 0) rather than F(t_k, x_k).
  std::vector<char> projected;

  Eigen::Index dimension() const { return states.front().size(); }
  const Vec& initial() const { return states.front(); }
  const Vec& final() const { return states.back(); }
  double sup_norm() const;
  Vec state_at(double t) const;  // GridError when t is not a node

  /// Trajectory reading states only (selections zero), for functional checks.
  static Trajectory from_states(TimeGrid grid, std::vector<Vec> states);
};

struct SelectionStrategy {
  enum class Kind { center, random, extremal, filtered, homotopy };

  Kind kind = Kind::center;
  std::uint64_t seed = 0;
  // extremal: direction from grad V when `potential` is set, else `direction`.
  Vec direction;
  Extremum mode = Extremum::max;
  std::optional<Potential> potential;
  int sign = -1;
  double R = 1.0;
  double lambda = 0.0;

  static SelectionStrategy center();
  static SelectionStrategy random(std::uint64_t seed);
  static SelectionStrategy extremal_fixed(Vec direction, Extremum mode);
  static SelectionStrategy extremal_gradient(Potential potential, Extremum mode);
  static SelectionStrategy filtered(Potential potential, int sign, double R);
  static SelectionStrategy homotopy(Potential potential, int sign, double R, double lambda);

  std::string describe() const;
};

/// Euler integration of x' in F(t, x) with left-node selections. Throws
/// GuidingViolation when a filtered/homotopy selection is empty and
/// DivergenceError on non-finite states.
Trajectory integrate(const MultiMap& map, const Vec& x0, const TimeGrid& grid, const SelectionStrategy& strategy);

/// Finite sample of the solution set: `bundle_size` trajectories, led by the
/// given strategies (with center and both grad-V extremals first when a
/// potential is supplied) and padded with seeded random selections.
std::vector<Trajectory> sample_solution_set(const MultiMap& map, const Vec& x0, const TimeGrid& grid,
                                            const std::vector<SelectionStrategy>& strategies, std::size_t bundle_size,
                                            std::uint64_t seed, const std::optional<Potential>& potential = std::nullopt);

struct EnvelopeDiagnostics {
  double slack = 0.0;          // C * dt
  double upper_excess = 0.0;   // max_k |x_k| - upper_k   (<= slack expected)
  double lower_deficit = 0.0;  // max_k lower_k - |x_k|   (<= slack expected)
  std::size_t worst_upper = 0;
  std::size_t worst_lower = 0;
  bool upper_violated = false;
  bool lower_violated = false;
};

/// Compares |x_k| with the Gronwall envelope (|x0|+1)e^{∫mu}-1 and the escape
/// envelope (|x0|+1)e^{-∫mu}-1, allowing C dt with
/// C = (1 + gronwall_upper(|x0|, ||mu||_1)) sup mu.
EnvelopeDiagnostics envelope_check(const Trajectory& traj, const GrowthProfile& growth);

/// max_k dist(F(t_k, x_k), f_k).
double membership_residual(const MultiMap& map, const Trajectory& traj);

bool euler_consistent(const Trajectory& traj);

/// CSV with header t,x1..xN,f1..fN, 17 significant digits; the last row
/// repeats the final selection.
std::string to_csv(const Trajectory& traj);

}  // namespace nlbvp
