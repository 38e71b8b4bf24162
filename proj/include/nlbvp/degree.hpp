#pragma once

#include "nlbvp/common.hpp"

#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace nlbvp {

using Field = std::function<Vec(const Vec&)>;

struct Box {
  Vec lower;
  Vec upper;
};

struct BallDomain {
  Vec center;
  double radius;
};

using Domain = std::variant<Box, BallDomain>;

Eigen::Index domain_dimension(const Domain& domain);
void validate_domain(const Domain& domain);

struct DegreeResult {
  int value = 0;
  int refinement_depth = 0;
  double boundary_min_norm = 0.0;
  std::size_t simplices = 0;
};

/// Brouwer degree deg(f, D, 0) for N <= 4.
///
/// N = 1 uses the endpoint sign formula. For N >= 2 the boundary of D is
/// triangulated (Kuhn triangulation of a uniform facet lattice, radially
/// projected for balls) and refined uniformly until on every boundary simplex
/// some component of f keeps one sign at all vertices with margin
/// min|f| / (2 sqrt N). The piecewise-linear image of the boundary then misses
/// the origin, and the degree is the signed count of boundary simplices whose
/// image meets a fixed ray from the origin. The value is accepted only when
/// the next refinement level is resolved too and agrees.
///
/// Throws DegenerateDomainError when min|f| on tested boundary points falls
/// below 1e-10, and InconclusiveError when `max_depth` levels do not suffice.
DegreeResult brouwer_degree(const Field& f, const Domain& domain, int max_depth = 6);

struct HomotopyCheck {
  bool pass = true;
  double min_norm = 0.0;
  std::optional<Vec> witness_x;
  double witness_lambda = 0.0;
};

/// Checks on sampled boundary points that lambda f + (1 - lambda) g has no
/// zero for lambda on a 101-point grid of [0, 1].
HomotopyCheck poincare_bohl_check(const Field& f, const Field& g, const Domain& domain, int samples_per_side = 0);

/// Deterministic boundary sample points of the domain.
std::vector<Vec> boundary_samples(const Domain& domain, int per_side);

// Field forms that can be stated in problem files.

struct AffineField {
  Mat A;
  Vec b;
  bool operator==(const AffineField& o) const;
};

struct Monomial {
  double coefficient;
  std::vector<int> exponents;
  bool operator==(const Monomial&) const = default;
};

/// Component i of the field is the sum of the monomials in components[i].
struct PolynomialField {
  std::vector<std::vector<Monomial>> components;
  bool operator==(const PolynomialField&) const = default;
};

using FieldSpec = std::variant<AffineField, PolynomialField>;

Field make_field(const FieldSpec& spec);

}  // namespace nlbvp
