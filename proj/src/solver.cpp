#include "nlbvp/solver.hpp"

#include <cmath>

namespace nlbvp {

namespace {

constexpr double kJacobianStep = 1e-6;
constexpr int kMaxHalvings = 30;

struct NewtonOutcome {
  Vec x;
  Vec residual;
  int iterations = 0;
};

NewtonOutcome damped_newton(const ShootingResidual& rho, Vec x, double target, int max_iter) {
  Vec r = rho(x);
  int it = 0;
  const auto n = x.size();
  while (it < max_iter && r.norm() > target) {
    Mat J(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double h = kJacobianStep * std::max(1.0, std::abs(x[i]));
      Vec xp = x;
      xp[i] += h;
      J.col(i) = (rho(xp) - r) / h;
    }
    const Vec delta = J.fullPivLu().solve(-r);
    if (!delta.allFinite()) break;
    bool accepted = false;
    double alpha = 1.0;
    for (int halving = 0; halving <= kMaxHalvings; ++halving, alpha *= 0.5) {
      Vec xn = x + alpha * delta;
      Vec rn;
      try {
        rn = rho(xn);
      } catch (const DivergenceError&) {
        continue;
      }
      if (rn.norm() < r.norm()) {
        x = std::move(xn);
        r = std::move(rn);
        accepted = true;
        break;
      }
    }
    ++it;
    if (!accepted) break;
  }
  return {std::move(x), std::move(r), it};
}

std::vector<Vec> start_points(const Domain& box, int per_axis) {
  return std::visit(
      [&](const auto& dom) -> std::vector<Vec> {
        using D = std::decay_t<decltype(dom)>;
        Vec lo, hi;
        if constexpr (std::is_same_v<D, Box>) {
          lo = dom.lower;
          hi = dom.upper;
        } else {
          lo = dom.center.array() - dom.radius / std::sqrt(static_cast<double>(dom.center.size()));
          hi = dom.center.array() + dom.radius / std::sqrt(static_cast<double>(dom.center.size()));
        }
        const auto n = lo.size();
        if (per_axis <= 1) return {Vec(0.5 * (lo + hi))};
        std::vector<Vec> out;
        std::vector<int> k(static_cast<std::size_t>(n), 0);
        for (;;) {
          Vec x(n);
          // Lexicographic order: the first axis varies slowest.
          for (Eigen::Index i = 0; i < n; ++i)
            x[i] = lo[i] + (hi[i] - lo[i]) * k[static_cast<std::size_t>(i)] / (per_axis - 1);
          out.push_back(x);
          auto i = static_cast<std::ptrdiff_t>(n) - 1;
          while (i >= 0 && k[static_cast<std::size_t>(i)] == per_axis - 1) k[static_cast<std::size_t>(i--)] = 0;
          if (i < 0) break;
          ++k[static_cast<std::size_t>(i)];
        }
        return out;
      },
      box);
}

void finalize(SolveReport& rep, const MultiMap& working, const BoundaryFunctional& g, Trajectory traj,
              const SolverOptions& options) {
  rep.x0 = traj.initial();
  rep.residual_bc = (traj.initial() - g.apply(traj)).norm();
  rep.residual_dyn = membership_residual(working, traj);
  rep.envelope = envelope_check(traj, working.growth());
  rep.solution = std::move(traj);
  rep.solved = rep.residual_bc <= options.tol_bc && rep.residual_dyn <= options.tol_dyn;
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::fixed_point: return "fixed_point";
    case Method::shooting: return "shooting";
    case Method::continuation: return "continuation";
  }
  return "";
}

std::optional<Method> method_from_string(const std::string& s) {
  if (s == "fixed_point") return Method::fixed_point;
  if (s == "shooting") return Method::shooting;
  if (s == "continuation") return Method::continuation;
  return std::nullopt;
}

MultiMap working_map(const MultiMap& map, const BoundaryFunctional& g) {
  return g.side() == Side::terminal ? map.time_reversed() : map;
}

TimeGrid make_grid(const MultiMap& map, const BoundaryFunctional& g, int steps) {
  const auto times = g.evaluation_times();
  return TimeGrid(map.horizon(), steps, times);
}

Vec ShootingResidual::operator()(const Vec& x0) const {
  const Trajectory traj = integrate(map, x0, grid, strategy);
  return x0 - g.apply(traj);
}

Trajectory ShootingResidual::trajectory(const Vec& x0) const { return integrate(map, x0, grid, strategy); }

BoundSummary summarize_bounds(const MultiMap& map, const BoundaryFunctional& g, double x0_norm,
                              std::optional<double> guiding_R) {
  BoundSummary s;
  s.mu_total = map.growth().mu_total();
  s.gronwall_upper = gronwall_upper(x0_norm, s.mu_total);
  s.escape_lower = escape_lower(x0_norm, s.mu_total);
  if (guiding_R && *guiding_R > 0.0) s.apriori_M = apriori_M(*guiding_R, s.mu_total);
  s.g_growth = apply_growth(g);
  if (s.g_growth.c > 0.0 && s.g_growth.c < 1.0) s.schauder = schauder_radius(s.g_growth.c, s.g_growth.d, s.mu_total);
  return s;
}

SolveReport solve_fixed_point(const MultiMap& map, const BoundaryFunctional& g, const TimeGrid& grid,
                              const SelectionStrategy& strategy, const SolverOptions& options) {
  const MultiMap working = working_map(map, g);
  SolveReport rep;
  rep.method = Method::fixed_point;
  rep.time_reversed = g.side() == Side::terminal;
  rep.strategy = strategy.describe();

  Vec x = options.initial_guess ? *options.initial_guess : Vec(Vec::Zero(map.dimension()));
  rep.iterate_history.push_back(x);
  bool converged = false;
  for (int it = 1; it <= options.max_iter; ++it) {
    const Vec next = g.apply(integrate(working, x, grid, strategy));
    rep.iterate_history.push_back(next);
    rep.iterations = it;
    const double step = (next - x).norm();
    x = next;
    if (step < options.tol_bc) {
      converged = true;
      break;
    }
  }

  rep.bounds = summarize_bounds(working, g, 0.0, std::nullopt);
  if (rep.bounds.schauder && rep.bounds.schauder->corrected_radius) {
    const double r = *rep.bounds.schauder->corrected_radius;
    bool inside = true;
    for (const auto& v : rep.iterate_history) inside = inside && v.norm() <= r + 1e-9;
    rep.stayed_in_invariant_ball = inside;
  }
  if (apply_growth(g).c >= 1.0) rep.message = "warning: g is not contractive (c >= 1); convergence not guaranteed. ";

  finalize(rep, working, g, integrate(working, x, grid, strategy), options);
  rep.solved = rep.solved && converged;
  rep.message += converged ? "iteration converged" : "iteration did not converge within max_iter";
  return rep;
}

SolveReport solve_shooting(const MultiMap& map, const BoundaryFunctional& g, const TimeGrid& grid,
                           const SelectionStrategy& strategy, const SolverOptions& options) {
  const MultiMap working = working_map(map, g);
  SolveReport rep;
  rep.method = Method::shooting;
  rep.time_reversed = g.side() == Side::terminal;
  rep.strategy = strategy.describe();

  const auto n = map.dimension();
  const Domain box = options.box ? *options.box : Domain(Box{Vec::Constant(n, -10.0), Vec::Constant(n, 10.0)});
  validate_domain(box);
  const ShootingResidual rho{working, g, grid, strategy};

  std::vector<Vec> starts =
      options.initial_guess ? std::vector<Vec>{*options.initial_guess} : start_points(box, options.multistart);
  const double target = std::min(1e-3 * options.tol_bc, 1e-9);

  std::optional<NewtonOutcome> best;
  for (const auto& s : starts) {
    NewtonOutcome out = damped_newton(rho, s, target, options.newton_max_iter);
    rep.iterate_history.push_back(out.x);
    if (!best || out.residual.norm() < best->residual.norm()) best = std::move(out);
  }
  rep.iterations = best->iterations;

  if (options.degree_certificate && !options.initial_guess) {
    try {
      rep.degree_certificate = brouwer_degree(rho, box, options.degree_depth).value;
    } catch (const Error&) {
      rep.degree_certificate.reset();
    }
  }

  rep.bounds = summarize_bounds(working, g, best->x.norm(), std::nullopt);
  finalize(rep, working, g, rho.trajectory(best->x), options);
  rep.message = rep.solved ? "root found" : "no root within tolerance; best |rho| = " + std::to_string(rep.residual_bc);
  return rep;
}

SolveReport solve_continuation(const MultiMap& map, const BoundaryFunctional& g, const Potential& potential,
                               const GuidingCertificate& cert, int sign, const TimeGrid& grid,
                               const SolverOptions& options) {
  if (sign != 1 && sign != -1) throw ConfigError("continuation: sign must be +1 or -1");
  if (options.lambda_steps < 1) throw ConfigError("continuation: lambda_steps must be >= 1");
  const MultiMap working = working_map(map, g);
  // Reversing time negates F, which swaps positive and negative guiding.
  const int working_sign = g.side() == Side::terminal ? -sign : sign;

  SolveReport rep;
  rep.method = Method::continuation;
  rep.time_reversed = g.side() == Side::terminal;
  const bool compatible = (sign == 1 && cert.weak_positive) ||
                          (sign == -1 && (cert.weak_negative || cert.strict_negative));
  if (!compatible) rep.message = std::string("warning: sign incompatible with classification ") +
                                 to_string(cert.classification) + ". ";

  Vec x = options.initial_guess ? *options.initial_guess : Vec(Vec::Zero(map.dimension()));
  SolverOptions step_options = options;
  step_options.multistart = 1;
  step_options.degree_certificate = false;

  std::optional<SolveReport> last;
  for (int i = 0; i <= options.lambda_steps; ++i) {
    const double lambda = 1.0 - static_cast<double>(i) / options.lambda_steps;
    const auto strategy = i == options.lambda_steps
                              ? SelectionStrategy::filtered(potential, working_sign, cert.R)
                              : SelectionStrategy::homotopy(potential, working_sign, cert.R, lambda);
    step_options.initial_guess = x;
    try {
      last = solve_shooting(map, g, grid, strategy, step_options);
    } catch (const GuidingViolation& v) {
      rep.violation = GuidingWitness{v.time(), v.state(), lambda};
      rep.message += std::string("aborted: ") + v.what();
      rep.x0 = x;
      rep.bounds = summarize_bounds(working, g, x.norm(), cert.R);
      return rep;
    }
    rep.lambda_path.push_back({lambda, last->x0, last->residual_bc, last->iterations});
    rep.iterations += last->iterations;
    if (last->residual_bc > options.tol_bc) {
      rep.message += "shooting failed at lambda=" + std::to_string(lambda);
      rep.x0 = last->x0;
      rep.solution = last->solution;
      rep.residual_bc = last->residual_bc;
      rep.bounds = summarize_bounds(working, g, x.norm(), cert.R);
      return rep;
    }
    x = last->x0;
  }

  rep.strategy = last->strategy;
  rep.bounds = summarize_bounds(working, g, x.norm(), cert.R);
  finalize(rep, working, g, std::move(*last->solution), options);
  rep.message += rep.solved ? "continuation reached lambda=0" : "lambda=0 solution failed certification";
  return rep;
}

Certification certify(const SolveReport& report, const MultiMap& map, const BoundaryFunctional& g, double tol_bc,
                      double tol_dyn) {
  Certification c;
  if (!report.solution) return c;
  const MultiMap working = working_map(map, g);
  const Trajectory& traj = *report.solution;
  c.residual_bc = (traj.initial() - g.apply(traj)).norm();
  c.residual_dyn = membership_residual(working, traj);
  c.euler_consistent = euler_consistent(traj);
  c.envelope = envelope_check(traj, working.growth());
  c.pass = c.residual_bc <= tol_bc && c.residual_dyn <= tol_dyn && c.euler_consistent;
  return c;
}

}  // namespace nlbvp
