#include "nlbvp/degree.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <numeric>
#include <optional>

namespace nlbvp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kBoundaryZero = 1e-10;
constexpr double kRayAmbiguity = 1e-9;

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

// Fixed generic ray directions; later entries are fallbacks for rays that
// graze a simplex edge.
Vec ray_direction(Eigen::Index n, int which) {
  static const double table[][4] = {{0.8127, 0.3589, 0.4642, 0.1163},
                                    {-0.2791, 0.7717, 0.1338, -0.5560},
                                    {0.4410, -0.6271, 0.5333, 0.3517},
                                    {-0.6093, -0.2257, -0.4769, 0.5917},
                                    {0.1471, 0.5297, -0.7905, -0.2712}};
  Vec e(n);
  for (Eigen::Index i = 0; i < n; ++i) e[i] = table[which][i];
  if (n == 1) e[0] = 1.0;
  return e / e.norm();
}

struct Lattice {
  const Domain& domain;
  Eigen::Index n;
  int m;

  Vec point(const std::vector<int>& k) const {
    return std::visit(overloaded{[&](const Box& b) -> Vec {
                                   Vec x(n);
                                   for (Eigen::Index i = 0; i < n; ++i)
                                     x[i] = b.lower[i] + (b.upper[i] - b.lower[i]) * k[static_cast<std::size_t>(i)] / m;
                                   return x;
                                 },
                                 [&](const BallDomain& b) -> Vec {
                                   Vec u(n);
                                   for (Eigen::Index i = 0; i < n; ++i)
                                     u[i] = -1.0 + 2.0 * static_cast<double>(k[static_cast<std::size_t>(i)]) / m;
                                   return b.center + (b.radius / u.norm()) * u;
                                 }},
                      domain);
  }

  Vec center() const {
    return std::visit(overloaded{[](const Box& b) -> Vec { return 0.5 * (b.lower + b.upper); },
                                 [](const BallDomain& b) -> Vec { return b.center; }},
                      domain);
  }
};

// Kuhn triangulation of every boundary facet of the lattice {0..m}^n, as a
// flat list of n lattice-point codes per simplex (code = sum k_i (m+1)^i).
// Facet (axis, side) fixes coordinate `axis` at 0 or m; the remaining
// coordinates are walked in increasing global index order so neighbouring
// facets agree on shared faces.
std::vector<long> boundary_simplices(Eigen::Index n, int m) {
  std::vector<long> out;
  const auto nn = static_cast<int>(n);
  std::vector<long> stride(static_cast<std::size_t>(nn), 1);
  for (int i = 1; i < nn; ++i) stride[static_cast<std::size_t>(i)] = stride[static_cast<std::size_t>(i - 1)] * (m + 1);
  for (int axis = 0; axis < nn; ++axis) {
    for (int side : {0, m}) {
      std::vector<int> free_axes;
      for (int i = 0; i < nn; ++i)
        if (i != axis) free_axes.push_back(i);
      const auto f = free_axes.size();
      std::vector<int> cell(f, 0);
      for (;;) {
        long base = side * stride[static_cast<std::size_t>(axis)];
        for (std::size_t a = 0; a < f; ++a) base += cell[a] * stride[static_cast<std::size_t>(free_axes[a])];
        std::vector<int> perm(f);
        std::iota(perm.begin(), perm.end(), 0);
        do {
          long code = base;
          out.push_back(code);
          for (std::size_t step = 0; step < f; ++step) {
            code += stride[static_cast<std::size_t>(free_axes[static_cast<std::size_t>(perm[step])])];
            out.push_back(code);
          }
        } while (std::next_permutation(perm.begin(), perm.end()));
        std::size_t i = 0;
        while (i < f && cell[i] == m - 1) cell[i++] = 0;
        if (i == f) break;
        ++cell[i];
      }
    }
  }
  return out;
}

std::vector<int> decode(long code, Eigen::Index n, int m) {
  std::vector<int> k(static_cast<std::size_t>(n));
  for (auto& v : k) {
    v = static_cast<int>(code % (m + 1));
    code /= (m + 1);
  }
  return k;
}

DegreeResult degree_1d(const Field& f, const Domain& domain) {
  double a = 0.0;
  double b = 0.0;
  std::visit(overloaded{[&](const Box& box) {
                          a = box.lower[0];
                          b = box.upper[0];
                        },
                        [&](const BallDomain& ball) {
                          a = ball.center[0] - ball.radius;
                          b = ball.center[0] + ball.radius;
                        }},
             domain);
  const double fa = f(Vec::Constant(1, a))[0];
  const double fb = f(Vec::Constant(1, b))[0];
  DegreeResult r;
  r.boundary_min_norm = std::min(std::abs(fa), std::abs(fb));
  if (!std::isfinite(fa) || !std::isfinite(fb)) throw DegenerateDomainError("degree: field not finite on boundary");
  if (r.boundary_min_norm < kBoundaryZero) throw DegenerateDomainError("degree: field vanishes on the boundary");
  r.value = (sgn(fb) - sgn(fa)) / 2;
  return r;
}

}  // namespace

Eigen::Index domain_dimension(const Domain& domain) {
  return std::visit(overloaded{[](const Box& b) { return b.lower.size(); },
                               [](const BallDomain& b) { return b.center.size(); }},
                    domain);
}

void validate_domain(const Domain& domain) {
  std::visit(overloaded{[](const Box& b) {
                          if (b.lower.size() == 0 || b.lower.size() != b.upper.size())
                            throw ConfigError("box: lower/upper dimension mismatch");
                          if (!(b.lower.array() < b.upper.array()).all())
                            throw ConfigError("box: lower < upper required componentwise");
                        },
                        [](const BallDomain& b) {
                          if (b.center.size() == 0 || !b.center.allFinite()) throw ConfigError("ball: bad center");
                          if (!(b.radius > 0.0)) throw ConfigError("ball: radius must be > 0");
                        }},
             domain);
}

namespace {

// Degree of the piecewise-linear boundary image at lattice resolution 2^depth,
// or nothing when some simplex is unresolved or every ray grazes an edge.
std::optional<DegreeResult> degree_at_depth(const Field& f, const Domain& domain, Eigen::Index n, int depth) {
  const int m = 1 << depth;
  const Lattice lattice{domain, n, m};
  const auto simplices = boundary_simplices(n, m);
  const auto un = static_cast<std::size_t>(n);
  const std::size_t count = simplices.size() / un;

  std::unordered_map<long, std::size_t> slot;
  std::vector<Vec> points;
  std::vector<Vec> values;
  std::vector<std::size_t> vertex(simplices.size());
  double min_norm = INFINITY;
  for (std::size_t i = 0; i < simplices.size(); ++i) {
    auto [it, inserted] = slot.try_emplace(simplices[i], points.size());
    if (inserted) {
      Vec x = lattice.point(decode(simplices[i], n, m));
      Vec y = f(x);
      if (y.size() != n || !y.allFinite()) throw DegenerateDomainError("degree: field not finite on boundary");
      min_norm = std::min(min_norm, y.norm());
      points.push_back(std::move(x));
      values.push_back(std::move(y));
    }
    vertex[i] = it->second;
  }
  if (min_norm < kBoundaryZero) throw DegenerateDomainError("degree: field vanishes on the boundary");

  const double margin = min_norm / (2.0 * std::sqrt(static_cast<double>(n)));
  for (std::size_t s = 0; s < count; ++s) {
    bool some_component = false;
    for (Eigen::Index q = 0; q < n && !some_component; ++q) {
      const int first = sgn(values[vertex[s * un]][q]);
      bool ok = first != 0;
      double peak = 0.0;
      for (std::size_t v = 0; v < un && ok; ++v) {
        const double y = values[vertex[s * un + v]][q];
        ok = sgn(y) == first;
        peak = std::max(peak, std::abs(y));
      }
      some_component = ok && peak >= margin;
    }
    if (!some_component) return std::nullopt;
  }

  const Vec c = lattice.center();
  for (int which = 0; which < 5; ++which) {
    const Vec e = ray_direction(n, which);
    long total = 0;
    bool ambiguous = false;
    for (std::size_t s = 0; s < count && !ambiguous; ++s) {
      Mat image(n, n);
      Mat cone(n, n);
      for (std::size_t i = 0; i < un; ++i) {
        image.col(static_cast<Eigen::Index>(i)) = values[vertex[s * un + i]];
        cone.col(static_cast<Eigen::Index>(i)) = points[vertex[s * un + i]] - c;
      }
      const double det_image = image.determinant();
      if (det_image == 0.0) continue;
      const Vec coef = image.partialPivLu().solve(e);
      const double lo = coef.minCoeff() / coef.cwiseAbs().sum();
      if (lo > kRayAmbiguity)
        total += sgn(det_image) * sgn(cone.determinant());
      else if (lo > -kRayAmbiguity)
        ambiguous = true;
    }
    if (ambiguous) continue;
    DegreeResult r;
    r.value = static_cast<int>(total);
    r.refinement_depth = depth;
    r.boundary_min_norm = min_norm;
    r.simplices = count;
    return r;
  }
  return std::nullopt;
}

}  // namespace

DegreeResult brouwer_degree(const Field& f, const Domain& domain, int max_depth) {
  validate_domain(domain);
  const Eigen::Index n = domain_dimension(domain);
  if (n > 4) throw ConfigError("degree: dimension above 4 is not supported");
  if (n == 1) return degree_1d(f, domain);

  // A value is accepted once two consecutive resolutions agree.
  std::optional<DegreeResult> previous;
  for (int depth = 0; depth <= max_depth; ++depth) {
    auto current = degree_at_depth(f, domain, n, depth);
    if (previous && current && previous->value == current->value) return *previous;
    previous = std::move(current);
  }
  throw InconclusiveError("degree: refinement budget exhausted (depth " + std::to_string(max_depth) + ")");
}

std::vector<Vec> boundary_samples(const Domain& domain, int per_side) {
  validate_domain(domain);
  const Eigen::Index n = domain_dimension(domain);
  const Lattice lattice{domain, n, per_side};
  std::vector<Vec> out;
  std::vector<int> k(static_cast<std::size_t>(n), 0);
  for (;;) {
    bool on_boundary = false;
    for (int v : k) on_boundary = on_boundary || v == 0 || v == per_side;
    if (on_boundary) out.push_back(lattice.point(k));
    std::size_t i = 0;
    while (i < k.size() && k[i] == per_side) k[i++] = 0;
    if (i == k.size()) break;
    ++k[i];
  }
  return out;
}

HomotopyCheck poincare_bohl_check(const Field& f, const Field& g, const Domain& domain, int samples_per_side) {
  const Eigen::Index n = domain_dimension(domain);
  if (samples_per_side <= 0) samples_per_side = n == 1 ? 1 : n == 2 ? 64 : n == 3 ? 12 : 6;
  HomotopyCheck out;
  out.min_norm = INFINITY;
  for (const auto& x : boundary_samples(domain, samples_per_side)) {
    const Vec fx = f(x);
    const Vec gx = g(x);
    for (int i = 0; i <= 100; ++i) {
      const double lambda = i / 100.0;
      const double norm = (lambda * fx + (1.0 - lambda) * gx).norm();
      out.min_norm = std::min(out.min_norm, norm);
      if (norm <= kBoundaryZero && out.pass) {
        out.pass = false;
        out.witness_x = x;
        out.witness_lambda = lambda;
      }
    }
  }
  return out;
}

bool AffineField::operator==(const AffineField& o) const {
  return A.rows() == o.A.rows() && A.cols() == o.A.cols() && A == o.A && b.size() == o.b.size() && b == o.b;
}

Field make_field(const FieldSpec& spec) {
  return std::visit(overloaded{[](const AffineField& a) -> Field {
                                 return [a](const Vec& x) -> Vec { return a.A * x + a.b; };
                               },
                               [](const PolynomialField& p) -> Field {
                                 return [p](const Vec& x) -> Vec {
                                   Vec out = Vec::Zero(static_cast<Eigen::Index>(p.components.size()));
                                   for (std::size_t i = 0; i < p.components.size(); ++i) {
                                     for (const auto& mono : p.components[i]) {
                                       double term = mono.coefficient;
                                       for (std::size_t j = 0; j < mono.exponents.size(); ++j)
                                         term *= std::pow(x[static_cast<Eigen::Index>(j)], mono.exponents[j]);
                                       out[static_cast<Eigen::Index>(i)] += term;
                                     }
                                   }
                                   return out;
                                 };
                               }},
                    spec);
}

}  // namespace nlbvp
