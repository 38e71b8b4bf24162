#include "nlbvp/nonlocal.hpp"

#include "nlbvp/linalg.hpp"

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

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

bool AffineEval::operator==(const AffineEval& o) const {
  if (times != o.times || matrices.size() != o.matrices.size()) return false;
  for (std::size_t i = 0; i < matrices.size(); ++i)
    if (matrices[i].rows() != o.matrices[i].rows() || matrices[i].cols() != o.matrices[i].cols() ||
        matrices[i] != o.matrices[i])
      return false;
  return offset.size() == o.offset.size() && offset == o.offset;
}

BoundaryFunctional::BoundaryFunctional(Eigen::Index dimension, double horizon, BoundaryKind kind, Side side)
    : dimension_(dimension), horizon_(horizon), kind_(std::move(kind)), side_(side) {
  if (dimension_ < 1) throw ConfigError("boundary: dimension must be >= 1");
  if (!(horizon_ > 0.0)) throw ConfigError("boundary: horizon must be > 0");
  std::visit(overloaded{[](const AntiPeriodic&) {},
                        [&](const MultiPoint& mp) {
                          if (mp.alphas.empty() || mp.alphas.size() != mp.times.size())
                            throw ConfigError("multi_point: need matching nonempty alphas and times");
                          double prev = 0.0;
                          for (double t : mp.times) {
                            if (!(t > prev) || t > horizon_)
                              throw ConfigError("multi_point: times must satisfy 0 < t1 < ... < tn <= T");
                            prev = t;
                          }
                          double abs_sum = 0.0;
                          double sum = 0.0;
                          for (double a : mp.alphas) {
                            abs_sum += std::abs(a);
                            sum += a;
                          }
                          if (abs_sum > 1.0)
                            throw ConfigError("multi_point: sum |alpha_i| = " + fmt(abs_sum) + " exceeds 1");
                          if (std::abs(sum - 1.0) <= 1e-12)
                            throw ConfigError("multi_point: sum alpha_i = 1 is excluded (constant solutions would all qualify)");
                        },
                        [&](const MeanValue& mv) {
                          std::visit(overloaded{[&](const LinearMap& h) {
                                                  if (h.C.rows() != dimension_ || h.C.cols() != dimension_)
                                                    throw ConfigError("mean_value: C must be N x N");
                                                  if (linalg::operator_norm(h.C) > 1.0 + 1e-12)
                                                    throw ConfigError("mean_value: |h(x)| <= |x| requires |C| <= 1");
                                                },
                                                [](const RadialClamp& h) {
                                                  if (!(h.scale >= 0.0 && h.scale <= 1.0))
                                                    throw ConfigError("mean_value: clamp scale must lie in [0, 1]");
                                                }},
                                     mv.h);
                        },
                        [&](const AffineEval& ae) {
                          if (ae.matrices.empty() || ae.matrices.size() != ae.times.size())
                            throw ConfigError("affine_eval: need matching nonempty matrices and times");
                          for (std::size_t i = 0; i < ae.times.size(); ++i) {
                            if (!(ae.times[i] >= 0.0 && ae.times[i] <= horizon_))
                              throw ConfigError("affine_eval: times must lie in [0, T]");
                            if (ae.matrices[i].rows() != dimension_ || ae.matrices[i].cols() != dimension_)
                              throw ConfigError("affine_eval: matrices must be N x N");
                          }
                          if (ae.offset.size() != dimension_) throw ConfigError("affine_eval: offset must be an N-vector");
                        }},
             kind_);
}

std::vector<double> BoundaryFunctional::evaluation_times() const {
  return std::visit(overloaded{[&](const AntiPeriodic&) { return std::vector<double>{horizon_}; },
                               [&](const MultiPoint& mp) {
                                 std::vector<double> out;
                                 for (double t : mp.times) out.push_back(working_time(t));
                                 return out;
                               },
                               [](const MeanValue&) { return std::vector<double>{}; },
                               [&](const AffineEval& ae) {
                                 std::vector<double> out;
                                 for (double t : ae.times) out.push_back(working_time(t));
                                 return out;
                               }},
                    kind_);
}

Vec BoundaryFunctional::apply(const Trajectory& traj) const {
  if (traj.dimension() != dimension_) throw DomainError("boundary: trajectory has wrong dimension");
  if (std::abs(traj.grid.horizon() - horizon_) > 1e-12 * horizon_)
    throw GridError("boundary: trajectory horizon differs from T");
  return std::visit(
      overloaded{// x(0) = -x(T); on the terminal side x(T) = -x(0), i.e. y(0) = -y(T) again.
                 [&](const AntiPeriodic&) -> Vec { return -traj.final(); },
                 [&](const MultiPoint& mp) -> Vec {
                   Vec acc = mp.alphas[0] * traj.state_at(working_time(mp.times[0]));
                   for (std::size_t i = 1; i < mp.alphas.size(); ++i)
                     acc += mp.alphas[i] * traj.state_at(working_time(mp.times[i]));
                   return acc;
                 },
                 [&](const MeanValue& mv) -> Vec {
                   auto h = [&](const Vec& x) -> Vec {
                     return std::visit(overloaded{[&](const LinearMap& l) -> Vec { return l.C * x; },
                                                  [&](const RadialClamp& c) -> Vec { return c.scale * x; }},
                                       mv.h);
                   };
                   Vec sum = Vec::Zero(dimension_);
                   Vec left = h(traj.states.front());
                   for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) {
                     Vec right = h(traj.states[k + 1]);
                     sum += (0.5 * traj.grid.step(k)) * (left + right);
                     left = std::move(right);
                   }
                   return sum / horizon_;
                 },
                 [&](const AffineEval& ae) -> Vec {
                   Vec acc = ae.offset;
                   for (std::size_t i = 0; i < ae.times.size(); ++i)
                     acc += ae.matrices[i] * traj.state_at(working_time(ae.times[i]));
                   return acc;
                 }},
      kind_);
}

Vec BoundaryFunctional::apply_constant(const Vec& x0) const {
  const auto times = evaluation_times();
  TimeGrid grid(horizon_, 1, times);
  std::vector<Vec> states(grid.nodes().size(), x0);
  return apply(Trajectory::from_states(std::move(grid), std::move(states)));
}

GrowthEstimate apply_growth(const BoundaryFunctional& g) {
  return std::visit(overloaded{[](const AntiPeriodic&) { return GrowthEstimate{1.0, 0.0}; },
                               [](const MultiPoint& mp) {
                                 double c = 0.0;
                                 for (double a : mp.alphas) c += std::abs(a);
                                 return GrowthEstimate{c, 0.0};
                               },
                               [](const MeanValue& mv) {
                                 return std::visit(
                                     overloaded{[](const LinearMap& l) { return GrowthEstimate{linalg::operator_norm(l.C), 0.0}; },
                                                [](const RadialClamp& c) { return GrowthEstimate{c.scale, 0.0}; }},
                                     mv.h);
                               },
                               [](const AffineEval& ae) {
                                 double c = 0.0;
                                 for (const auto& a : ae.matrices) c += linalg::operator_norm(a);
                                 return GrowthEstimate{c, ae.offset.norm()};
                               }},
                    g.kind());
}

const char* to_string(ConditionResult::Status s) {
  switch (s) {
    case ConditionResult::Status::pass: return "pass";
    case ConditionResult::Status::fail: return "fail";
    case ConditionResult::Status::not_tested: return "not_tested";
  }
  return "";
}

Th4Report check_th4_conditions(const BoundaryFunctional& g, const Potential& potential, const GuidingCertificate& cert,
                               const std::vector<Trajectory>& candidates, int sphere_samples, double candidate_tol) {
  using Status = ConditionResult::Status;
  Th4Report rep;
  rep.level = cert.r;
  const auto n = g.dimension();

  if (!check_coercive(potential)) {
    rep.ii.detail = rep.iii.detail = "potential not coercive; level set unbounded";
  } else {
    const int per_side = sphere_samples > 0 ? sphere_samples : default_directions_per_side(n);
    rep.ii.status = rep.iii.status = Status::pass;
    rep.ii.worst = -INFINITY;
    rep.iii.worst = INFINITY;
    for (const auto& e : sphere_directions(n, per_side)) {
      const Vec x0 = level_set_radius(potential, e, cert.r) * e;
      const Vec gx = g.apply_constant(x0);
      ++rep.ii.tested;
      ++rep.iii.tested;
      const double excess = gx.norm() - x0.norm();
      rep.ii.worst = std::max(rep.ii.worst, excess);
      if (excess > 1e-10 * std::max(1.0, x0.norm()) && rep.ii.status == Status::pass) {
        rep.ii.status = Status::fail;
        rep.ii.witness = x0;
        rep.ii.detail = "|g(i(x0))| = " + fmt(gx.norm()) + " > |x0| = " + fmt(x0.norm());
      }
      const double gap = (x0 - gx).norm();
      rep.iii.worst = std::min(rep.iii.worst, gap);
      if (gap <= 1e-10 && rep.iii.status == Status::pass) {
        rep.iii.status = Status::fail;
        rep.iii.witness = x0;
        rep.iii.detail = "x0 is a fixed point of g∘i on the level set";
      }
    }
    if (rep.ii.status == Status::pass) rep.ii.detail = "level set sampled at " + std::to_string(rep.ii.tested) + " points";
    if (rep.iii.status == Status::pass) rep.iii.detail = rep.ii.detail;
  }

  rep.i.worst = -INFINITY;
  for (const auto& traj : candidates) {
    const Vec gx = g.apply(traj);
    if ((traj.initial() - gx).norm() > candidate_tol) continue;
    ++rep.i.tested;
    bool found = false;
    double best = INFINITY;
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
      const double gap = gx.norm() - traj.states[k].norm();
      best = std::min(best, gap);
      if (gap <= 1e-9) {
        found = true;
        break;
      }
    }
    rep.i.worst = std::max(rep.i.worst, best);
    if (!found && rep.i.status != Status::fail) {
      rep.i.status = Status::fail;
      rep.i.witness = traj.initial();
      rep.i.detail = "candidate with |g(x)| > |x(t)| for every t in (0, T]";
    }
  }
  if (rep.i.tested == 0) {
    rep.i.detail = "no candidate solutions supplied; condition quantifies over function space";
  } else if (rep.i.status != Status::fail) {
    rep.i.status = Status::pass;
    rep.i.detail = "checked on " + std::to_string(rep.i.tested) + " candidate solutions only";
  }
  return rep;
}

Th6Report check_th6_conditions(const BoundaryFunctional& g, int grid_steps, int random_paths, std::uint64_t seed,
                               int degree_depth) {
  using Status = ConditionResult::Status;
  Th6Report rep;
  const auto n = g.dimension();
  const double T = g.horizon();
  auto times = g.evaluation_times();
  const TimeGrid grid(T, grid_steps, times);
  const auto& nodes = grid.nodes();

  // Largest open gap of [0, T] free of evaluation times; the bump peaks at
  // the node closest to its midpoint.
  std::sort(times.begin(), times.end());
  double gap_lo = 0.0;
  double gap_hi = T;
  if (!times.empty()) {
    std::vector<double> cuts{0.0};
    cuts.insert(cuts.end(), times.begin(), times.end());
    cuts.push_back(T);
    double widest = -1.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (cuts[i + 1] - cuts[i] > widest) {
        widest = cuts[i + 1] - cuts[i];
        gap_lo = cuts[i];
        gap_hi = cuts[i + 1];
      }
    }
  }
  const double mid = 0.5 * (gap_lo + gap_hi);
  std::size_t peak = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (nodes[k] > gap_lo && nodes[k] < gap_hi && std::abs(nodes[k] - mid) < std::abs(nodes[peak] - mid)) peak = k;
  if (!(nodes[peak] > gap_lo && nodes[peak] < gap_hi)) peak = nodes.size() / 2;
  const double half = std::max(std::min(nodes[peak] - gap_lo, gap_hi - nodes[peak]), 1e-300);

  std::vector<Vec> directions;
  for (Eigen::Index i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e[i] = 1.0;
    directions.push_back(e);
    directions.push_back(-e);
  }
  Rng rng(seed);
  for (int i = 0; i < 4; ++i) directions.push_back(rng.unit_vec(n));

  rep.family = "constants, tent bumps vanishing at every evaluation time of g (peak t=" + fmt(nodes[peak]) +
               "), " + std::to_string(random_paths) + " random paths; ||x|| in {1e2, 1e3, 1e4}";
  rep.liminf_estimate = INFINITY;
  auto consider = [&](std::vector<Vec> states, const std::string& label) {
    auto traj = Trajectory::from_states(grid, std::move(states));
    const double sup = traj.sup_norm();
    if (!(sup > 0.0)) return;
    const double ratio = g.apply(traj).norm() / sup;
    ++rep.a.tested;
    if (ratio < rep.liminf_estimate) {
      rep.liminf_estimate = ratio;
      rep.a.witness = traj.states[peak];
      rep.a.detail = label + ": |g(x)|/||x|| = " + fmt(ratio);
    }
  };

  for (double scale : {1e2, 1e3, 1e4}) {
    for (const auto& e : directions) {
      consider(std::vector<Vec>(nodes.size(), Vec(scale * e)), "constant path, ||x||=" + fmt(scale));
      std::vector<Vec> bump;
      bump.reserve(nodes.size());
      for (double t : nodes) bump.push_back(scale * std::max(0.0, 1.0 - std::abs(t - nodes[peak]) / half) * e);
      consider(std::move(bump), "bump path, ||x||=" + fmt(scale));
    }
    for (int p = 0; p < random_paths; ++p) {
      std::vector<Vec> walk;
      walk.reserve(nodes.size());
      Vec x = rng.normal_vec(n);
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        walk.push_back(x);
        x += rng.normal_vec(n) * std::sqrt(grid.max_step());
      }
      double sup = 0.0;
      for (const auto& w : walk) sup = std::max(sup, w.norm());
      for (auto& w : walk) w *= scale / sup;
      consider(std::move(walk), "random path, ||x||=" + fmt(scale));
    }
  }
  rep.a.worst = rep.liminf_estimate;
  rep.a.status = rep.liminf_estimate > 1.0 + 1e-6 ? Status::pass : Status::fail;
  if (rep.a.status == Status::pass) rep.a.witness.reset();

  const auto g_of_i = [&g](const Vec& x0) { return g.apply_constant(x0); };
  rep.b.status = Status::fail;
  rep.b.detail = "no sphere free of sampled zeros of g∘i found up to radius 2^20";
  for (int k = 0; k <= 20; ++k) {
    const double R = std::ldexp(1.0, k);
    const BallDomain ball{Vec::Zero(n), R};
    double min_norm = INFINITY;
    for (const auto& x : boundary_samples(ball, n == 1 ? 1 : 8)) min_norm = std::min(min_norm, g_of_i(x).norm());
    ++rep.b.tested;
    if (!(min_norm > 1e-10)) continue;
    DegreeResult deg;
    try {
      deg = brouwer_degree(g_of_i, ball, degree_depth);
    } catch (const DegenerateDomainError&) {
      continue;
    }
    rep.degree = deg;
    rep.degree_radius = R;
    rep.b.worst = deg.value;
    rep.b.status = deg.value != 0 ? Status::pass : Status::fail;
    rep.b.detail = "deg(g∘i, B(" + fmt(R) + "), 0) = " + std::to_string(deg.value);
    break;
  }
  return rep;
}

}  // namespace nlbvp
