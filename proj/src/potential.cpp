#include "nlbvp/potential.hpp"

#include "nlbvp/convexset.hpp"
#include "nlbvp/linalg.hpp"
#include "nlbvp/multimap.hpp"

#include <Eigen/Eigenvalues>

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

constexpr double kGradientFloor = 1e-8;
constexpr double kGuidingMargin = 1e-10;

std::vector<double> trimmed(std::vector<double> c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  return c;
}

}  // namespace

namespace poly {

double eval(const std::vector<double>& c, double u) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
  return acc;
}

std::vector<double> derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(static_cast<double>(i) * c[i]);
  return d;
}

std::vector<double> real_roots(const std::vector<double>& coeffs) {
  const auto c = trimmed(coeffs);
  if (c.size() < 2) return {};
  const auto degree = static_cast<Eigen::Index>(c.size() - 1);
  const double lead = c.back();
  Mat companion = Mat::Zero(degree, degree);
  for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < degree; ++i) companion(i, degree - 1) = -c[static_cast<std::size_t>(i)] / lead;
  Eigen::EigenSolver<Mat> solver(companion, false);
  const auto d = derivative(c);
  std::vector<double> roots;
  for (Eigen::Index i = 0; i < degree; ++i) {
    const auto z = solver.eigenvalues()[i];
    if (std::abs(z.imag()) > 1e-7 * (1.0 + std::abs(z.real()))) continue;
    double u = z.real();
    for (int it = 0; it < 20; ++it) {
      const double fp = eval(d, u);
      if (fp == 0.0) break;
      const double step = eval(c, u) / fp;
      if (!std::isfinite(step)) break;
      u -= step;
      if (std::abs(step) <= 1e-16 * (1.0 + std::abs(u))) break;
    }
    roots.push_back(u);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace poly

Potential::Potential(Eigen::Index dimension, PotentialFamily family)
    : dimension_(dimension), family_(std::move(family)) {
  if (dimension_ < 1) throw ConfigError("potential dimension must be >= 1");
  std::visit(overloaded{[](const Radial& r) {
                          if (r.coeffs.empty()) throw ConfigError("radial potential needs coefficients");
                          for (double c : r.coeffs)
                            if (!std::isfinite(c)) throw ConfigError("radial potential coefficient not finite");
                        },
                        [&](const Quadratic& q) {
                          if (q.A.rows() != dimension_ || q.A.cols() != dimension_)
                            throw ConfigError("quadratic potential: A must be N x N");
                          if (!linalg::is_symmetric(q.A)) throw ConfigError("quadratic potential: A must be symmetric");
                        }},
             family_);
}

Potential Potential::half_norm_squared(Eigen::Index dimension) { return Potential(dimension, Radial{{0.0, 1.0}}); }

double Potential::value(const Vec& x) const {
  return std::visit(overloaded{[&](const Radial& r) { return poly::eval(r.coeffs, 0.5 * x.squaredNorm()); },
                               [&](const Quadratic& q) { return 0.5 * x.dot(q.A * x); }},
                    family_);
}

Vec Potential::gradient(const Vec& x) const {
  return std::visit(overloaded{[&](const Radial& r) -> Vec {
                                 return poly::eval(poly::derivative(r.coeffs), 0.5 * x.squaredNorm()) * x;
                               },
                               [&](const Quadratic& q) -> Vec { return q.A * x; }},
                    family_);
}

Vec field_wv(const Potential& potential, const Vec& x) {
  Vec g = potential.gradient(x);
  const double len = g.norm();
  if (len <= 1.0) return g;
  return g / len;
}

const char* to_string(Guiding g) {
  switch (g) {
    case Guiding::weak_positive: return "weak_positive";
    case Guiding::weak_negative: return "weak_negative";
    case Guiding::strict_negative: return "strict_negative";
    case Guiding::none: return "none";
  }
  return "none";
}

int default_directions_per_side(Eigen::Index dimension) {
  switch (dimension) {
    case 1: return 1;
    case 2: return 32;
    case 3: return 8;
    case 4: return 4;
    default: return 2;
  }
}

std::vector<Vec> sphere_directions(Eigen::Index dimension, int per_side) {
  if (per_side < 1) throw ConfigError("sphere_directions: per_side must be >= 1");
  std::vector<Vec> out;
  std::vector<int> k(static_cast<std::size_t>(dimension), 0);
  for (;;) {
    bool on_boundary = false;
    for (int v : k) on_boundary = on_boundary || v == 0 || v == per_side;
    if (on_boundary) {
      Vec u(dimension);
      for (Eigen::Index i = 0; i < dimension; ++i)
        u[i] = -1.0 + 2.0 * static_cast<double>(k[static_cast<std::size_t>(i)]) / per_side;
      out.push_back(u / u.norm());
    }
    std::size_t i = 0;
    while (i < k.size() && k[i] == per_side) k[i++] = 0;
    if (i == k.size()) break;
    ++k[i];
  }
  return out;
}

GuidingCertificate classify_guiding(const Potential& potential, const MultiMap& map, const GuidingGrid& grid) {
  if (!(grid.R_max > 0.0) || grid.radial_steps < 1 || grid.time_steps < 1 || grid.directions_per_side < 0)
    throw ConfigError("classify_guiding: degenerate grid");
  if (potential.dimension() != map.dimension()) throw ConfigError("classify_guiding: dimension mismatch");

  const int per_side =
      grid.directions_per_side > 0 ? grid.directions_per_side : default_directions_per_side(map.dimension());
  const auto directions = sphere_directions(map.dimension(), per_side);

  const double T = map.horizon();
  std::vector<double> times;
  for (int i = 0; i <= grid.time_steps; ++i) times.push_back(T * i / grid.time_steps);
  const auto& breaks = map.growth().mu().breakpoints;
  double left = 0.0;
  for (std::size_t i = 0; i <= breaks.size(); ++i) {
    const double right = i < breaks.size() ? breaks[i] : T;
    times.push_back(0.5 * (left + right));
    if (i < breaks.size()) times.push_back(right);
    left = right;
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  const int J = grid.radial_steps;
  const double dr = grid.R_max / J;
  std::vector<char> nonsingular(J + 1, 1), wp(J + 1, 1), wn(J + 1, 1), sn(J + 1, 1);
  GuidingCertificate cert;
  cert.sample_resolution = dr;
  cert.R_max = grid.R_max;

  for (int j = 1; j <= J; ++j) {
    const double radius = dr * j;
    for (const auto& e : directions) {
      const Vec x = radius * e;
      const Vec g = potential.gradient(x);
      if (!(g.norm() > kGradientFloor)) nonsingular[j] = 0;
      for (double t : times) {
        const auto range = inner_product_range(map.value(t, x), g);
        ++cert.points_tested;
        if (!(range.upper >= -kGuidingMargin)) wp[j] = 0;
        if (!(range.lower <= kGuidingMargin)) wn[j] = 0;
        if (!(range.upper <= -kGuidingMargin)) sn[j] = 0;
      }
    }
  }

  // Smallest shell index from which every outer shell passes.
  auto threshold = [&](const std::vector<char>& ok) -> std::optional<double> {
    int j = J;
    if (!(ok[J] && nonsingular[J])) return std::nullopt;
    while (j > 1 && ok[j - 1] && nonsingular[j - 1]) --j;
    return dr * j;
  };

  if (auto R = threshold(sn)) {
    cert.strict_negative = true;
    cert.R_strict_negative = *R;
  }
  if (auto R = threshold(wp)) {
    cert.weak_positive = true;
    cert.R_weak_positive = *R;
  }
  if (auto R = threshold(wn)) {
    cert.weak_negative = true;
    cert.R_weak_negative = *R;
  }

  if (cert.strict_negative) {
    cert.classification = Guiding::strict_negative;
    cert.R = cert.R_strict_negative;
  } else if (cert.weak_positive) {
    cert.classification = Guiding::weak_positive;
    cert.R = cert.R_weak_positive;
  } else if (cert.weak_negative) {
    cert.classification = Guiding::weak_negative;
    cert.R = cert.R_weak_negative;
  } else {
    cert.classification = Guiding::none;
    cert.R = grid.R_max;
  }

  double vmax = potential.value(Vec::Zero(map.dimension()));
  for (int j = 1; j <= J && dr * j <= cert.R * (1.0 + 1e-12); ++j)
    for (const auto& e : directions) vmax = std::max(vmax, potential.value(dr * j * e));
  cert.r = vmax + 1.0;
  return cert;
}

MonotoneCheck check_monotone(const Potential& potential, int samples, std::uint64_t seed, double R_max) {
  MonotoneCheck out;
  const Eigen::Index n = potential.dimension();
  Vec e1 = Vec::Zero(n);
  e1[0] = 1.0;

  std::visit(overloaded{[&](const Radial& r) {
                          const auto d1 = poly::derivative(r.coeffs);
                          const auto d2 = poly::derivative(d1);
                          const double hi = 0.5 * R_max * R_max;
                          std::vector<double> candidates{0.0, hi};
                          for (int i = 1; i < 1000; ++i) candidates.push_back(hi * i / 1000.0);
                          for (double u : poly::real_roots(d2))
                            if (u > 0.0 && u < hi) candidates.push_back(u);
                          double worst_u = 0.0;
                          double worst = poly::eval(d1, 0.0);
                          for (double u : candidates) {
                            const double v = poly::eval(d1, u);
                            if (v < worst) {
                              worst = v;
                              worst_u = u;
                            }
                          }
                          if (worst >= -1e-12) return;
                          out.pass = false;
                          double delta = 1e-3 * (1.0 + worst_u);
                          const double base = poly::eval(r.coeffs, worst_u);
                          while (delta > 1e-14 && !(poly::eval(r.coeffs, worst_u + delta) < base)) delta *= 0.5;
                          out.witness = std::make_pair(Vec(std::sqrt(2.0 * worst_u) * e1),
                                                       Vec(std::sqrt(2.0 * (worst_u + delta)) * e1));
                        },
                        [&](const Quadratic& q) {
                          const auto eig = linalg::symmetric_eigen(q.A);
                          const double lo = eig.values[0];
                          const double hi = eig.values[n - 1];
                          const double scale = std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
                          if (hi - lo > 1e-12 * scale) {
                            out.pass = false;
                            out.witness = std::make_pair(Vec(eig.vectors.col(n - 1)), Vec(eig.vectors.col(0)));
                          } else if (lo < -1e-12) {
                            out.pass = false;
                            out.witness = std::make_pair(Vec(Vec::Zero(n)), e1);
                          }
                        }},
             potential.family());
  if (!out.pass) return out;

  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    Vec x = rng.uniform(0.0, R_max) * rng.unit_vec(n);
    Vec y = rng.uniform(0.0, R_max) * rng.unit_vec(n);
    if (x.norm() > y.norm()) std::swap(x, y);
    const double vx = potential.value(x);
    const double vy = potential.value(y);
    if (vx > vy + 1e-12 * std::max(1.0, std::abs(vy))) {
      out.pass = false;
      out.witness = std::make_pair(x, y);
      break;
    }
  }
  return out;
}

bool check_coercive(const Potential& potential) {
  return std::visit(overloaded{[](const Radial& r) {
                                 const auto c = trimmed(r.coeffs);
                                 return c.size() >= 2 && c.back() > 0.0;
                               },
                               [](const Quadratic& q) { return linalg::symmetric_eigenvalues(q.A)[0] > 1e-10; }},
                    potential.family());
}

namespace {

// Largest u >= 0 with phi(u) = r, given phi(0) < r and phi coercive.
double largest_level_u(const std::vector<double>& coeffs, double r) {
  auto p = trimmed(coeffs);
  p[0] -= r;
  double best = 0.0;
  for (double u : poly::real_roots(p)) best = std::max(best, u);
  // Bracket and bisect so that p > 0 strictly beyond the returned value.
  double lo = best;
  double hi = std::max(2.0 * best, 1.0);
  while (poly::eval(p, hi) <= 0.0) hi *= 2.0;
  for (double step = 1e-12 * (1.0 + best); poly::eval(p, lo) > 0.0 && step < 1.0 + best; step *= 4.0)
    lo = std::max(0.0, best - step);
  if (poly::eval(p, lo) > 0.0) lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (poly::eval(p, mid) <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

}  // namespace

double sublevel_ball_radius(const Potential& potential, double r) {
  if (!check_coercive(potential)) throw ConfigError("sublevel_ball_radius: potential is not coercive");
  if (!(r > potential.value(Vec::Zero(potential.dimension()))))
    throw ConfigError("sublevel_ball_radius: level must exceed V(0)");
  return std::visit(overloaded{[&](const Radial& rad) { return std::sqrt(2.0 * largest_level_u(rad.coeffs, r)) + 1e-6; },
                               [&](const Quadratic& q) {
                                 return std::sqrt(2.0 * r / linalg::symmetric_eigenvalues(q.A)[0]);
                               }},
                    potential.family());
}

double level_set_radius(const Potential& potential, const Vec& direction, double r) {
  if (!check_coercive(potential)) throw ConfigError("level_set_radius: potential is not coercive");
  if (!(r > potential.value(Vec::Zero(potential.dimension()))))
    throw ConfigError("level_set_radius: level must exceed V(0)");
  const Vec e = direction / direction.norm();
  return std::visit(overloaded{[&](const Radial& rad) { return std::sqrt(2.0 * largest_level_u(rad.coeffs, r)); },
                               [&](const Quadratic& q) { return std::sqrt(2.0 * r / e.dot(q.A * e)); }},
                    potential.family());
}

}  // namespace nlbvp
