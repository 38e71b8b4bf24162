#include "nlbvp/ivp.hpp"

#include "nlbvp/bounds.hpp"
#include "nlbvp/convexset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace nlbvp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Vec random_element(const ConvexSet& set, Rng& rng) {
  return std::visit(overloaded{[&](const Ball& b) -> Vec {
                                 const auto n = b.center.size();
                                 const double scale = std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
                                 return b.center + (b.radius * scale) * rng.unit_vec(n);
                               },
                               [&](const Polytope& p) -> Vec {
                                 std::vector<double> w(p.vertices.size());
                                 double total = 0.0;
                                 for (auto& v : w) {
                                   double u = rng.uniform();
                                   while (u <= 0.0) u = rng.uniform();
                                   v = -std::log(u);
                                   total += v;
                                 }
                                 Vec out = Vec::Zero(p.vertices.front().size());
                                 for (std::size_t i = 0; i < w.size(); ++i) out += (w[i] / total) * p.vertices[i];
                                 return out;
                               },
                               [](const Singleton& s) -> Vec { return s.point; }},
                    set.shape());
}

}  // namespace

TimeGrid::TimeGrid(double horizon, int steps, std::span<const double> required_times)
    : horizon_(horizon), base_steps_(steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("time grid: horizon must be > 0");
  if (steps < 1) throw ConfigError("time grid: need at least one step");
  nodes_.reserve(static_cast<std::size_t>(steps) + 1 + required_times.size());
  for (int k = 0; k <= steps; ++k) nodes_.push_back(horizon * k / steps);
  nodes_.front() = 0.0;
  nodes_.back() = horizon;
  for (double t : required_times) {
    if (!(t >= 0.0 && t <= horizon)) throw GridError("time grid: required time outside [0, T]");
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t);
    const double snap = 1e-12 * horizon;
    if (it != nodes_.end() && std::abs(*it - t) <= snap) {
      *it = t;
    } else if (it != nodes_.begin() && std::abs(*(it - 1) - t) <= snap) {
      *(it - 1) = t;
    } else {
      nodes_.insert(it, t);
    }
  }
  for (std::size_t k = 1; k < nodes_.size(); ++k)
    if (!(nodes_[k] > nodes_[k - 1])) throw GridError("time grid: nodes not strictly increasing");
}

double TimeGrid::max_step() const {
  double m = 0.0;
  for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) m = std::max(m, step(k));
  return m;
}

std::optional<std::size_t> TimeGrid::index_of(double t) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t);
  if (it == nodes_.end() || *it != t) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

double Trajectory::sup_norm() const {
  double m = 0.0;
  for (const auto& x : states) m = std::max(m, x.norm());
  return m;
}

Vec Trajectory::state_at(double t) const {
  auto k = grid.index_of(t);
  if (!k) throw GridError("trajectory has no node at t=" + std::to_string(t));
  return states[*k];
}

Trajectory Trajectory::from_states(TimeGrid grid, std::vector<Vec> states) {
  if (states.size() != grid.nodes().size()) throw GridError("from_states: one state per node required");
  const auto n = states.front().size();
  const std::size_t intervals = grid.intervals();
  return Trajectory{std::move(grid), std::move(states), std::vector<Vec>(intervals, Vec::Zero(n)),
                    std::vector<char>(intervals, 0)};
}

SelectionStrategy SelectionStrategy::center() { return {}; }

SelectionStrategy SelectionStrategy::random(std::uint64_t seed) {
  SelectionStrategy s;
  s.kind = Kind::random;
  s.seed = seed;
  return s;
}

SelectionStrategy SelectionStrategy::extremal_fixed(Vec direction, Extremum mode) {
  SelectionStrategy s;
  s.kind = Kind::extremal;
  s.direction = std::move(direction);
  s.mode = mode;
  return s;
}

SelectionStrategy SelectionStrategy::extremal_gradient(Potential potential, Extremum mode) {
  SelectionStrategy s;
  s.kind = Kind::extremal;
  s.potential = std::move(potential);
  s.mode = mode;
  return s;
}

SelectionStrategy SelectionStrategy::filtered(Potential potential, int sign, double R) {
  SelectionStrategy s;
  s.kind = Kind::filtered;
  s.potential = std::move(potential);
  s.sign = sign;
  s.R = R;
  return s;
}

SelectionStrategy SelectionStrategy::homotopy(Potential potential, int sign, double R, double lambda) {
  SelectionStrategy s;
  s.kind = Kind::homotopy;
  s.potential = std::move(potential);
  s.sign = sign;
  s.R = R;
  s.lambda = lambda;
  return s;
}

std::string SelectionStrategy::describe() const {
  const char* m = mode == Extremum::max ? "max" : "min";
  switch (kind) {
    case Kind::center: return "center";
    case Kind::random: return "random(seed=" + std::to_string(seed) + ")";
    case Kind::extremal:
      return potential ? std::string("extremal(gradV,") + m + ")" : "extremal(" + format_vec(direction) + "," + m + ")";
    case Kind::filtered: return "filtered(sign=" + std::to_string(sign) + ")";
    case Kind::homotopy: return "homotopy(sign=" + std::to_string(sign) + ",lambda=" + std::to_string(lambda) + ")";
  }
  return "";
}

constexpr double kDivergenceNorm = 1e150;

Trajectory integrate(const MultiMap& map, const Vec& x0, const TimeGrid& grid, const SelectionStrategy& strategy) {
  if (x0.size() != map.dimension()) throw DomainError("integrate: x0 has wrong dimension");
  if (std::abs(grid.horizon() - map.horizon()) > 1e-12 * map.horizon())
    throw ConfigError("integrate: grid horizon differs from the map horizon");
  using Kind = SelectionStrategy::Kind;
  if ((strategy.kind == Kind::filtered || strategy.kind == Kind::homotopy) && !strategy.potential)
    throw ConfigError("integrate: filtered/homotopy strategies need a potential");
  if (strategy.kind == Kind::extremal && !strategy.potential && strategy.direction.size() != map.dimension())
    throw ConfigError("integrate: extremal direction has wrong dimension");

  const std::size_t K = grid.intervals();
  Trajectory traj{grid, {}, {}, {}};
  traj.states.reserve(K + 1);
  traj.selections.reserve(K);
  traj.projected.reserve(K);
  traj.states.push_back(x0);
  Rng rng(strategy.seed);
  const Vec origin = Vec::Zero(map.dimension());

  for (std::size_t k = 0; k < K; ++k) {
    const double t = grid.nodes()[k];
    const double dt = grid.step(k);
    const Vec& x = traj.states.back();
    // Beyond this F(t, x) itself overflows for any nontrivial linear part.
    if (!(x.norm() <= kDivergenceNorm))
      throw DivergenceError("integrate: state norm exceeded 1e150 at t=" + std::to_string(t));
    Vec f;
    switch (strategy.kind) {
      case Kind::center: f = map.value(t, x).center_point(); break;
      case Kind::random: f = random_element(map.value(t, x), rng); break;
      case Kind::extremal: {
        const Vec dir = strategy.potential ? strategy.potential->gradient(x) : strategy.direction;
        f = select_extremal(map, t, x, dir, strategy.mode);
        break;
      }
      case Kind::filtered: {
        auto y = select_filtered(map, *strategy.potential, t, x, strategy.sign, strategy.R);
        if (!y) throw GuidingViolation(t, x, 0.0);
        f = std::move(*y);
        break;
      }
      case Kind::homotopy: {
        const HomotopyField field{map, *strategy.potential, strategy.sign, strategy.lambda};
        auto y = homotopy_value(field, t, x, strategy.R);
        if (!y) throw GuidingViolation(t, x, strategy.lambda);
        f = std::move(*y);
        break;
      }
    }

    char projected = 0;
    if (map.is_relay() && x[0] != 0.0) {
      const double next = x[0] + dt * f[0];
      const bool crosses = (x[0] > 0.0 && next <= 0.0) || (x[0] < 0.0 && next >= 0.0);
      if (crosses && distance_to(map.value(t, origin), origin) <= 1e-10) {
        f = Vec::Constant(1, -x[0] / dt);
        projected = 1;
      }
    }

    Vec next = x + dt * f;
    if (!next.allFinite()) throw DivergenceError("integrate: state left the finite range at t=" + std::to_string(t));
    traj.selections.push_back(std::move(f));
    traj.projected.push_back(projected);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

std::vector<Trajectory> sample_solution_set(const MultiMap& map, const Vec& x0, const TimeGrid& grid,
                                            const std::vector<SelectionStrategy>& strategies, std::size_t bundle_size,
                                            std::uint64_t seed, const std::optional<Potential>& potential) {
  if (bundle_size < 1) throw ConfigError("sample_solution_set: bundle size must be >= 1");
  std::vector<SelectionStrategy> plan;
  if (potential) {
    plan.push_back(SelectionStrategy::center());
    plan.push_back(SelectionStrategy::extremal_gradient(*potential, Extremum::max));
    plan.push_back(SelectionStrategy::extremal_gradient(*potential, Extremum::min));
  }
  plan.insert(plan.end(), strategies.begin(), strategies.end());
  Rng seeds(seed);
  while (plan.size() < bundle_size) plan.push_back(SelectionStrategy::random(seeds.next()));
  plan.resize(bundle_size);

  std::vector<Trajectory> out;
  out.reserve(bundle_size);
  for (const auto& s : plan) out.push_back(integrate(map, x0, grid, s));
  return out;
}

EnvelopeDiagnostics envelope_check(const Trajectory& traj, const GrowthProfile& growth) {
  EnvelopeDiagnostics d;
  const double x0 = traj.initial().norm();
  const double C = (1.0 + gronwall_upper(x0, growth.mu_total())) * growth.sup();
  d.slack = C * traj.grid.max_step();
  d.upper_excess = -INFINITY;
  d.lower_deficit = -INFINITY;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const double integral = growth.integral_to(traj.grid.nodes()[k]);
    const double norm = traj.states[k].norm();
    const double upper = (x0 + 1.0) * std::exp(integral) - 1.0;
    const double lower = (x0 + 1.0) * std::exp(-integral) - 1.0;
    if (norm - upper > d.upper_excess) {
      d.upper_excess = norm - upper;
      d.worst_upper = k;
    }
    if (lower - norm > d.lower_deficit) {
      d.lower_deficit = lower - norm;
      d.worst_lower = k;
    }
  }
  const double rounding = 1e-12 * (1.0 + gronwall_upper(x0, growth.mu_total()));
  d.upper_violated = d.upper_excess > d.slack + rounding;
  d.lower_violated = d.lower_deficit > d.slack + rounding;
  return d;
}

double membership_residual(const MultiMap& map, const Trajectory& traj) {
  double worst = 0.0;
  const Vec origin = Vec::Zero(map.dimension());
  for (std::size_t k = 0; k < traj.selections.size(); ++k) {
    const double t = traj.grid.nodes()[k];
    const Vec& at = traj.projected[k] ? origin : traj.states[k];
    worst = std::max(worst, distance_to(map.value(t, at), traj.selections[k]));
  }
  return worst;
}

bool euler_consistent(const Trajectory& traj) {
  for (std::size_t k = 0; k < traj.selections.size(); ++k) {
    const Vec next = traj.states[k] + traj.grid.step(k) * traj.selections[k];
    if (next != traj.states[k + 1]) return false;
  }
  return true;
}

std::string to_csv(const Trajectory& traj) {
  const auto n = traj.dimension();
  std::string out = "t";
  for (Eigen::Index i = 1; i <= n; ++i) out += ",x" + std::to_string(i);
  for (Eigen::Index i = 1; i <= n; ++i) out += ",f" + std::to_string(i);
  out += '\n';
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
  };
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    put(traj.grid.nodes()[k]);
    for (Eigen::Index i = 0; i < n; ++i) {
      out += ',';
      put(traj.states[k][i]);
    }
    const Vec& f = traj.selections.empty() ? Vec(Vec::Zero(n))
                                           : traj.selections[std::min(k, traj.selections.size() - 1)];
    for (Eigen::Index i = 0; i < n; ++i) {
      out += ',';
      put(f[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace nlbvp
