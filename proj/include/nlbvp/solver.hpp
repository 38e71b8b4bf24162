#pragma once

#include "nlbvp/bounds.hpp"
#include "nlbvp/degree.hpp"
#include "nlbvp/ivp.hpp"
#include "nlbvp/multimap.hpp"
#include "nlbvp/nonlocal.hpp"
#include "nlbvp/potential.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nlbvp {

enum class Method { fixed_point, shooting, continuation };

const char* to_string(Method m);
std::optional<Method> method_from_string(const std::string& s);

struct SolverOptions {
  double tol_bc = 1e-6;
  double tol_dyn = 1e-9;
  int max_iter = 200;
  // Shooting: start points per axis of the search box (lexicographic order).
  int multistart = 1;
  std::optional<Domain> box;  // defaults to [-10, 10]^N
  int newton_max_iter = 50;
  bool degree_certificate = true;
  int degree_depth = 3;
  int lambda_steps = 32;
  std::optional<Vec> initial_guess;
};

struct LambdaPoint {
  double lambda;
  Vec x0;
  double residual_bc;
  int iterations;
};

struct BoundSummary {
  double mu_total = 0.0;
  double gronwall_upper = 0.0;
  double escape_lower = 0.0;
  std::optional<double> apriori_M;
  std::optional<SchauderRadius> schauder;
  GrowthEstimate g_growth;
};

struct GuidingWitness {
  double t;
  Vec x;
  double lambda;
};

struct SolveReport {
  Method method = Method::fixed_point;
  bool solved = false;
  bool time_reversed = false;
  std::optional<Trajectory> solution;
  Vec x0;
  double residual_bc = INFINITY;
  double residual_dyn = INFINITY;
  int iterations = 0;
  std::vector<LambdaPoint> lambda_path;
  std::vector<Vec> iterate_history;
  std::optional<bool> stayed_in_invariant_ball;
  std::optional<int> degree_certificate;
  std::optional<GuidingWitness> violation;
  std::optional<EnvelopeDiagnostics> envelope;
  BoundSummary bounds;
  std::string strategy;
  std::string message;
};

/// The map the solver integrates: F itself for x(0) = g(x), and the reversed
/// s -> -F(T - s, .) for x(T) = g(x).
MultiMap working_map(const MultiMap& map, const BoundaryFunctional& g);

/// Grid with n base steps containing every evaluation time of g.
TimeGrid make_grid(const MultiMap& map, const BoundaryFunctional& g, int steps);

/// rho(x0) = x0 - g(S(x0)) for a single-valued selection strategy.
struct ShootingResidual {
  const MultiMap& map;
  const BoundaryFunctional& g;
  const TimeGrid& grid;
  const SelectionStrategy& strategy;

  Vec operator()(const Vec& x0) const;
  Trajectory trajectory(const Vec& x0) const;
};

/// Iterates x0 <- g(S(x0)) from x0 = 0 (the Poincaré operator g∘S_F).
SolveReport solve_fixed_point(const MultiMap& map, const BoundaryFunctional& g, const TimeGrid& grid,
                              const SelectionStrategy& strategy, const SolverOptions& options = {});

/// Damped Newton with forward-difference Jacobian on rho, multistart over the
/// box; attaches deg(rho, box, 0) when it resolves.
SolveReport solve_shooting(const MultiMap& map, const BoundaryFunctional& g, const TimeGrid& grid,
                           const SelectionStrategy& strategy, const SolverOptions& options = {});

/// lambda from 1 to 0 along lambda (sign W_V) + (1 - lambda) F_V, shooting
/// warm-started at each step. Aborts with the witness on an empty F_V.
SolveReport solve_continuation(const MultiMap& map, const BoundaryFunctional& g, const Potential& potential,
                               const GuidingCertificate& cert, int sign, const TimeGrid& grid,
                               const SolverOptions& options = {});

struct Certification {
  bool pass = false;
  double residual_bc = INFINITY;
  double residual_dyn = INFINITY;
  bool euler_consistent = false;
  EnvelopeDiagnostics envelope;
};

/// Recomputes both residuals from the stored trajectory.
Certification certify(const SolveReport& report, const MultiMap& map, const BoundaryFunctional& g, double tol_bc,
                      double tol_dyn);

BoundSummary summarize_bounds(const MultiMap& map, const BoundaryFunctional& g, double x0_norm,
                              std::optional<double> guiding_R);

}  // namespace nlbvp
