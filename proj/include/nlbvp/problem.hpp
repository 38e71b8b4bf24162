#pragma once

#include "nlbvp/degree.hpp"
#include "nlbvp/multimap.hpp"
#include "nlbvp/nonlocal.hpp"
#include "nlbvp/potential.hpp"
#include "nlbvp/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace nlbvp {

// Problem files are sectioned key = value text ([section] headers, numbers,
// quoted strings, booleans, nested [ ] arrays, # comments).

class ParseError : public Error {
 public:
  ParseError(int line, std::string field, const std::string& message);
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

enum class StrategyKind { center, random, extremal_max, extremal_min, filtered };

const char* to_string(StrategyKind k);

struct SolverSpec {
  Method method = Method::shooting;
  double tol_bc = 1e-6;
  double tol_dyn = 1e-9;
  int grid_n = 10000;
  std::uint64_t seed = 0;
  int lambda_steps = 32;
  int max_iter = 200;
  int sign = -1;
  StrategyKind strategy = StrategyKind::center;
  std::optional<Vec> box_lower;
  std::optional<Vec> box_upper;
  int multistart = 1;
  int newton_max_iter = 50;
  bool degree_certificate = true;
  int degree_depth = 3;
  std::optional<Vec> initial_guess;
  bool operator==(const SolverSpec& o) const;
};

struct GuidingSpec {
  double R_max = 10.0;
  int radial_steps = 100;
  int directions_per_side = 0;
  int time_steps = 8;
  bool operator==(const GuidingSpec&) const = default;
};

struct VerifySpec {
  int monotone_samples = 2000;
  int sphere_samples = 0;
  int th6_grid_steps = 200;
  int random_paths = 8;
  int th6_depth = 6;
  bool operator==(const VerifySpec&) const = default;
};

/// Optional overrides for `bounds`; unset values are derived from the problem.
struct BoundsSpec {
  std::optional<double> x0_norm;
  std::optional<double> R;
  std::optional<double> c;
  std::optional<double> d;
  bool operator==(const BoundsSpec&) const = default;
};

struct DegreeSpec {
  Domain domain;
  int depth = 6;
  FieldSpec field;
  bool operator==(const DegreeSpec& o) const;
};

struct ProblemSpec {
  Eigen::Index dimension = 1;
  double horizon = 1.0;
  std::optional<MapFamily> multimap;
  std::optional<PotentialFamily> potential;
  std::optional<BoundaryKind> boundary;
  Side side = Side::initial;
  SolverSpec solver;
  GuidingSpec guiding;
  VerifySpec verify;
  BoundsSpec bounds;
  std::optional<DegreeSpec> degree;
  std::string output_dir;

  bool operator==(const ProblemSpec& o) const;

  MultiMap make_map() const;                  // ConfigError when absent
  BoundaryFunctional make_boundary() const;   // ConfigError when absent
  std::optional<Potential> make_potential() const;
  GuidingGrid guiding_grid() const;
};

/// Parses and validates; every failure is a ParseError naming line and field.
ProblemSpec parse_problem(const std::string& text);
ProblemSpec load_problem(const std::string& path);

/// Canonical text form; parse_problem(serialize_problem(p)) == p.
std::string serialize_problem(const ProblemSpec& spec);

}  // namespace nlbvp
