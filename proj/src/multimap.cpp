#include "nlbvp/multimap.hpp"

#include "nlbvp/linalg.hpp"
#include "nlbvp/potential.hpp"

#include <algorithm>
#include <cmath>

namespace nlbvp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

template <class T>
void validate_schedule(const PiecewiseConstant<T>& pc, double horizon, const char* what) {
  if (pc.values.size() != pc.breakpoints.size() + 1)
    throw ConfigError(std::string(what) + ": need exactly one more value than breakpoints");
  double prev = 0.0;
  for (double b : pc.breakpoints) {
    if (!(b > prev) || !(b < horizon))
      throw ConfigError(std::string(what) + ": breakpoints must increase strictly inside (0, T)");
    prev = b;
  }
}

std::vector<double> merged_breakpoints(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

GrowthProfile::GrowthProfile(double horizon, PiecewiseConstant<double> mu) : horizon_(horizon), mu_(std::move(mu)) {
  validate_schedule(mu_, horizon_, "growth profile");
  for (double v : mu_.values)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("growth profile: mu must be finite and >= 0");
}

double GrowthProfile::integral_to(double t) const {
  t = std::clamp(t, 0.0, horizon_);
  double total = 0.0;
  double left = 0.0;
  for (std::size_t i = 0; i < mu_.values.size(); ++i) {
    const double right = i < mu_.breakpoints.size() ? mu_.breakpoints[i] : horizon_;
    if (t <= left) break;
    total += mu_.values[i] * (std::min(t, right) - left);
    left = right;
  }
  return total;
}

double GrowthProfile::sup() const { return *std::max_element(mu_.values.begin(), mu_.values.end()); }

GrowthProfile GrowthProfile::reversed() const {
  PiecewiseConstant<double> r;
  for (auto it = mu_.breakpoints.rbegin(); it != mu_.breakpoints.rend(); ++it) r.breakpoints.push_back(horizon_ - *it);
  r.values.assign(mu_.values.rbegin(), mu_.values.rend());
  return GrowthProfile(horizon_, std::move(r));
}

bool LinearBall::operator==(const LinearBall& o) const {
  if (A.rows() != o.A.rows() || A.cols() != o.A.cols() || A != o.A) return false;
  if (b.breakpoints != o.b.breakpoints || b.values.size() != o.b.values.size()) return false;
  for (std::size_t i = 0; i < b.values.size(); ++i)
    if (b.values[i].size() != o.b.values[i].size() || b.values[i] != o.b.values[i]) return false;
  return rho == o.rho;
}

bool AffineHull::operator==(const AffineHull& o) const {
  if (A.size() != o.A.size() || b.size() != o.b.size()) return false;
  for (std::size_t j = 0; j < A.size(); ++j) {
    if (A[j].rows() != o.A[j].rows() || A[j].cols() != o.A[j].cols() || A[j] != o.A[j]) return false;
    if (b[j].size() != o.b[j].size() || b[j] != o.b[j]) return false;
  }
  return true;
}

namespace {

GrowthProfile growth_of(Eigen::Index n, double horizon, const MapFamily& family) {
  return std::visit(
      overloaded{
          [&](const LinearBall& f) {
            const double op = linalg::operator_norm(f.A);
            PiecewiseConstant<double> mu;
            mu.breakpoints = merged_breakpoints(f.b.breakpoints, f.rho.breakpoints);
            double left = 0.0;
            for (std::size_t i = 0; i <= mu.breakpoints.size(); ++i) {
              const double right = i < mu.breakpoints.size() ? mu.breakpoints[i] : horizon;
              const double mid = 0.5 * (left + right);
              mu.values.push_back(std::max(op, f.b.at(mid).norm() + f.rho.at(mid)));
              left = right;
            }
            return GrowthProfile(horizon, std::move(mu));
          },
          [&](const AffineHull& f) {
            double mu = 0.0;
            for (std::size_t j = 0; j < f.A.size(); ++j)
              mu = std::max({mu, linalg::operator_norm(f.A[j]), f.b[j].norm()});
            return GrowthProfile(horizon, PiecewiseConstant<double>(mu));
          },
          [&](const Relay& f) {
            (void)n;
            return GrowthProfile(horizon, PiecewiseConstant<double>(f.k));
          }},
      family);
}

void validate_family(Eigen::Index n, double horizon, const MapFamily& family) {
  std::visit(overloaded{[&](const LinearBall& f) {
                          if (f.A.rows() != n || f.A.cols() != n) throw ConfigError("linear_ball: A must be N x N");
                          if (!f.A.allFinite()) throw ConfigError("linear_ball: A not finite");
                          validate_schedule(f.b, horizon, "linear_ball b");
                          validate_schedule(f.rho, horizon, "linear_ball rho");
                          for (const auto& v : f.b.values)
                            if (v.size() != n || !v.allFinite()) throw ConfigError("linear_ball: b values must be finite N-vectors");
                          for (double r : f.rho.values)
                            if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("linear_ball: rho must be finite and >= 0");
                        },
                        [&](const AffineHull& f) {
                          if (f.A.empty() || f.A.size() != f.b.size())
                            throw ConfigError("affine_hull: need matching nonempty lists of matrices and offsets");
                          for (std::size_t j = 0; j < f.A.size(); ++j) {
                            if (f.A[j].rows() != n || f.A[j].cols() != n || !f.A[j].allFinite())
                              throw ConfigError("affine_hull: matrices must be finite N x N");
                            if (f.b[j].size() != n || !f.b[j].allFinite())
                              throw ConfigError("affine_hull: offsets must be finite N-vectors");
                          }
                        },
                        [&](const Relay& f) {
                          if (n != 1) throw ConfigError("relay: only defined for N = 1");
                          if (!(f.k > 0.0) || !std::isfinite(f.k)) throw ConfigError("relay: k must be > 0");
                        }},
             family);
}

}  // namespace

MultiMap::MultiMap(Eigen::Index dimension, double horizon, MapFamily family)
    : dimension_(dimension),
      horizon_(horizon),
      family_(std::move(family)),
      growth_(horizon > 0.0 ? horizon : 1.0, PiecewiseConstant<double>(0.0)) {
  if (dimension_ < 1) throw ConfigError("dimension must be >= 1");
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) throw ConfigError("horizon T must be finite and > 0");
  validate_family(dimension_, horizon_, family_);
  growth_ = growth_of(dimension_, horizon_, family_);
}

ConvexSet MultiMap::value(double t, const Vec& x) const {
  if (!(t >= 0.0 && t <= horizon_)) throw DomainError("value: t outside [0, T]");
  if (x.size() != dimension_) throw DomainError("value: state has wrong dimension");
  const double s = reversed_ ? horizon_ - t : t;
  ConvexSet set = std::visit(overloaded{[&](const LinearBall& f) {
                                          Vec c = f.A * x + f.b.at(s);
                                          return ConvexSet::ball(std::move(c), f.rho.at(s));
                                        },
                                        [&](const AffineHull& f) {
                                          std::vector<Vec> vs;
                                          vs.reserve(f.A.size());
                                          for (std::size_t j = 0; j < f.A.size(); ++j) vs.push_back(f.A[j] * x + f.b[j]);
                                          return ConvexSet::polytope(std::move(vs));
                                        },
                                        [&](const Relay& f) {
                                          if (x[0] > 0.0) return ConvexSet::singleton(Vec::Constant(1, -f.k));
                                          if (x[0] < 0.0) return ConvexSet::singleton(Vec::Constant(1, f.k));
                                          return ConvexSet::polytope({Vec::Constant(1, -f.k), Vec::Constant(1, f.k)});
                                        }},
                             family_);
  return reversed_ ? set.negated() : set;
}

MultiMap MultiMap::time_reversed() const {
  MultiMap out = *this;
  out.reversed_ = !reversed_;
  out.growth_ = growth_.reversed();
  return out;
}

GrowthProfile derive_growth(const MultiMap& map) { return map.growth(); }

Vec select_extremal(const MultiMap& map, double t, const Vec& x, const Vec& direction, Extremum mode) {
  const ConvexSet set = map.value(t, x);
  return extreme_point(set, mode == Extremum::max ? Vec(direction) : Vec(-direction));
}

std::optional<Vec> select_filtered(const MultiMap& map, const Potential& potential, double t, const Vec& x, int sign,
                                   double R) {
  if (!(R > 0.0)) throw DomainError("select_filtered: R must be > 0");
  if (sign != 1 && sign != -1) throw DomainError("select_filtered: sign must be +1 or -1");
  const Vec g = potential.gradient(x);
  const Extremum mode = sign > 0 ? Extremum::max : Extremum::min;
  Vec y = select_extremal(map, t, x, g, mode);
  if (x.norm() <= R) return y;
  const double ip = g.dot(y);
  const double slack = 1e-10 * std::max(1.0, g.norm() * y.norm());
  if (sign * ip >= -slack) return y;
  return std::nullopt;
}

std::optional<Vec> homotopy_value(const HomotopyField& field, double t, const Vec& x, double R) {
  if (!(field.lambda >= 0.0 && field.lambda <= 1.0)) throw DomainError("homotopy_value: lambda outside [0, 1]");
  auto filtered = select_filtered(field.base, field.potential, t, x, field.sign, R);
  if (!filtered) return std::nullopt;
  const Vec w = static_cast<double>(field.sign) * field_wv(field.potential, x);
  if (field.lambda == 1.0) return w;
  if (field.lambda == 0.0) return filtered;
  return Vec(field.lambda * w + (1.0 - field.lambda) * *filtered);
}

}  // namespace nlbvp
