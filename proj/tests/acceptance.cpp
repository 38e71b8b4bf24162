// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// argv[1] is the scenarios directory.

#include "nlbvp/commands.hpp"
#include "nlbvp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace nlbvp;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

Vec vec1(double x) { return Vec::Constant(1, x); }

MultiMap linear_ball(const Mat& A, const Vec& b, double rho, double T) {
  return MultiMap(A.rows(), T, LinearBall{A, PiecewiseConstant<Vec>(b), PiecewiseConstant<double>(rho)});
}

std::vector<std::filesystem::path> scenario_files(const std::string& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".toml") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

Outcome formula_fidelity() {
  const double tol = 1e-12;
  const double e = std::abs(escape_lower(3, std::log(2.0)) - 1.0);
  const double g = std::abs(gronwall_upper(3, std::log(2.0)) - 7.0);
  const double m = std::abs(apriori_M(1, 0) - 1.0);
  const double s = std::abs(schauder_radius(0.5, 1, 0).paper_radius - 2.0);
  const double worst = std::max({e, g, m, s});
  return {worst <= tol, "max error " + std::to_string(worst)};
}

Outcome escape_suite() {
  std::mt19937_64 eng(7);
  auto U = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); };
  int violations = 0;
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(k % 3);
    const double T = U(0.5, 2.0);
    Mat A(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) A(i, j) = U(-1, 1);
    const double cut = T * U(0.2, 0.8);
    Vec b0 = Vec::Zero(n), b1 = Vec::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      b0[i] = U(-1, 1);
      b1[i] = U(-1, 1);
    }
    const MultiMap F(n, T, LinearBall{A, PiecewiseConstant<Vec>({cut}, {b0, b1}),
                                      PiecewiseConstant<double>({cut}, {U(0, 1), U(0, 1)})});
    const double mu = F.growth().mu_total();
    const double r = U(0, 5);
    Vec dir(n);
    for (Eigen::Index i = 0; i < n; ++i) dir[i] = std::normal_distribution<double>()(eng);
    dir.normalize();
    const Vec x0 = (std::exp(mu) * (r + 1) - 1 + U(0.01, 2.0)) * dir;
    const auto strategy = (k % 2) ? SelectionStrategy::random(k) : SelectionStrategy::center();
    const auto traj = integrate(F, x0, TimeGrid(T, 10000), strategy);
    const auto d = envelope_check(traj, F.growth());
    double min_norm = INFINITY;
    for (const auto& x : traj.states) min_norm = std::min(min_norm, x.norm());
    if (!(min_norm > r - d.slack)) ++violations;
  }
  return {violations == 0, std::to_string(violations) + " violations in 200 draws"};
}

Outcome apriori_surrogate(const std::string& dir) {
  int checked = 0, failed = 0;
  for (const auto& path : scenario_files(dir)) {
    ProblemSpec spec;
    try {
      spec = load_problem(path.string());
    } catch (const Error&) {
      continue;
    }
    if (!spec.potential || !spec.multimap || !spec.boundary) continue;
    const auto res = run_solve(spec);
    const auto& guiding = res.report["guiding"];
    if (guiding.is_null() || !guiding["strict_negative"].get<bool>() || !res.report["solved"].get<bool>()) continue;
    ++checked;
    const auto& ap = res.report["apriori_check"];
    if (ap.is_null() || !ap["holds"].get<bool>()) ++failed;
  }
  return {checked > 0 && failed == 0, std::to_string(checked) + " scenarios checked, " + std::to_string(failed) + " failed"};
}

int degree_or(const Field& f, const Domain& d, int fallback) {
  try {
    return brouwer_degree(f, d, 6).value;
  } catch (const Error&) {
    return fallback;
  }
}

Outcome degree_axioms() {
  int disagreements = 0;
  for (Eigen::Index n = 1; n <= 3; ++n) {
    const Domain ball = BallDomain{Vec::Zero(n), 1.0};
    if (brouwer_degree([](const Vec& x) { return x; }, ball).value != 1) ++disagreements;
    if (brouwer_degree([](const Vec& x) { return Vec(-x); }, ball).value != (n % 2 ? -1 : 1)) ++disagreements;
  }

  std::mt19937_64 eng(11);
  auto U = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); };
  int polys = 0;
  while (polys < 100) {
    PolynomialField p;
    p.components.resize(1);
    for (int e = 0; e <= 4; ++e) p.components[0].push_back(Monomial{U(-2, 2), {e}});
    const double a = U(-2, 0), b = U(0.1, 2);
    const Field f = make_field(p);
    const double fa = f(vec1(a))[0], fb = f(vec1(b))[0];
    if (std::abs(fa) < 1e-6 || std::abs(fb) < 1e-6) continue;
    const int oracle = ((fb > 0) - (fb < 0) - (fa > 0) + (fa < 0)) / 2;
    if (degree_or(f, Box{vec1(a), vec1(b)}, 99) != oracle) ++disagreements;
    ++polys;
  }

  int splits = 0;
  while (splits < 50) {
    const Eigen::Index n = 1 + splits % 3;
    Mat A(n, n);
    Vec c(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      c[i] = U(-0.8, 0.8);
      for (Eigen::Index j = 0; j < n; ++j) A(i, j) = U(-1, 1);
    }
    if (std::abs(A.determinant()) < 0.05) continue;
    const Vec b = -A * c;  // root at c
    const Field f = make_field(AffineField{A, b});
    const Eigen::Index axis = splits % n;
    const double cut = U(-0.9, 0.9);
    if (std::abs(cut - c[axis]) < 0.05) continue;
    const Vec lo = Vec::Constant(n, -1), hi = Vec::Constant(n, 1);
    Vec mid_hi = hi, mid_lo = lo;
    mid_hi[axis] = cut;
    mid_lo[axis] = cut;
    const int whole = degree_or(f, Box{lo, hi}, 99);
    const int left = degree_or(f, Box{lo, mid_hi}, 99);
    const int right = degree_or(f, Box{mid_lo, hi}, 99);
    const int sign = A.determinant() > 0 ? 1 : -1;
    if (whole != sign || left + right != whole) ++disagreements;
    ++splits;
  }
  return {disagreements == 0, std::to_string(disagreements) + " disagreements (6 axioms, 100 quartics, 50 splits)"};
}

Outcome antiperiodic_benchmark() {
  const auto F = linear_ball(-Mat::Identity(1, 1), vec1(0.5), 0.0, 1.0);
  const BoundaryFunctional g(1, 1.0, AntiPeriodic{});
  SolverOptions o;
  o.tol_bc = 1e-9;
  const auto r = solve_fixed_point(F, g, make_grid(F, g, 10000), SelectionStrategy::center(), o);
  const double exact = -0.5 * (1 - std::exp(-1.0)) / (1 + std::exp(-1.0));
  const double err = std::abs(r.x0[0] - exact);
  const auto c = certify(r, F, g, 1e-4, 1e-9);
  return {r.solved && err <= 1e-4 && c.pass, "x0 = " + std::to_string(r.x0[0]) + ", error " + std::to_string(err)};
}

Outcome zero_benchmarks() {
  const auto F1 = linear_ball(-Mat::Identity(1, 1), vec1(0), 0.0, 1.0);
  const BoundaryFunctional g1(1, 1.0, MultiPoint{{0.5}, {1.0}});
  SolverOptions o;
  o.box = Box{vec1(-1), vec1(1)};
  o.multistart = 3;
  const auto a = solve_shooting(F1, g1, make_grid(F1, g1, 10000), SelectionStrategy::center(), o);

  const MultiMap F2(2, 1.0, AffineHull{{Mat::Zero(2, 2)}, {Vec::Zero(2)}});
  const BoundaryFunctional g2(2, 1.0, MeanValue{LinearMap{0.5 * Mat::Identity(2, 2)}});
  const auto b = solve_fixed_point(F2, g2, make_grid(F2, g2, 10000), SelectionStrategy::center());
  const bool ok = a.solved && b.solved && a.x0.norm() < 1e-8 && b.x0.norm() < 1e-8;
  return {ok, "|x0| multipoint " + std::to_string(a.x0.norm()) + ", mean value " + std::to_string(b.x0.norm())};
}

Outcome continuation_suite() {
  const auto F = linear_ball(-Mat::Identity(2, 2), Vec::Zero(2), 0.5, 1.0);
  const BoundaryFunctional g(2, 1.0, AntiPeriodic{});
  const auto V = Potential::half_norm_squared(2);
  const auto cert = classify_guiding(V, F, GuidingGrid{});
  SolverOptions o;
  o.lambda_steps = 32;
  const auto r = solve_continuation(F, g, V, cert, -1, make_grid(F, g, 2000), o);
  const bool ok = cert.classification == Guiding::strict_negative && cert.R_strict_negative <= 1.0 &&
                  !r.violation && r.lambda_path.size() == 33 && r.residual_bc < 1e-6;
  return {ok, std::string("classification ") + to_string(cert.classification) + ", R " +
                  std::to_string(cert.R_strict_negative) + ", steps " + std::to_string(r.lambda_path.size() - 1) +
                  ", residual " + std::to_string(r.residual_bc)};
}

Outcome negative_tests() {
  const BoundaryFunctional doubling(1, 1.0, AffineEval{{2 * Mat::Identity(1, 1)}, {1.0}, Vec::Zero(1)});
  const auto th6 = check_th6_conditions(doubling);
  const bool th6_ok = th6.a.status == ConditionResult::Status::fail && th6.a.witness.has_value() &&
                      th6.a.detail.rfind("bump", 0) == 0;

  bool rejected = false;
  try {
    BoundaryFunctional(1, 1.0, MultiPoint{{0.25, 0.75}, {0.5, 1.0}});
  } catch (const ConfigError&) {
    rejected = true;
  }

  const auto F = linear_ball(Mat::Identity(1, 1), vec1(0), 0.0, 1.0);
  const auto V = Potential::half_norm_squared(1);
  const auto empty = select_filtered(F, V, 0.5, vec1(2.0), -1, 1.0);
  const auto inside = select_filtered(F, V, 0.5, vec1(0.5), -1, 1.0);
  const bool filter_ok = !empty.has_value() && inside.has_value();

  return {th6_ok && rejected && filter_ok, std::string("growth condition ") + (th6_ok ? "refuted by bump" : "not refuted") +
                                               ", sum alpha = 1 " + (rejected ? "rejected" : "accepted") +
                                               ", filter " + (filter_ok ? "empty" : "non-empty")};
}

Outcome determinism(const std::string& dir) {
  int runs = 0, mismatches = 0;
  for (const auto& path : scenario_files(dir)) {
    for (const char* cmd : {"solve", "verify", "bounds", "degree"}) {
      const auto a = run_command(cmd, path.string(), Overrides{});
      const auto b = run_command(cmd, path.string(), Overrides{});
      ++runs;
      if (a.exit_code != b.exit_code || a.report.dump() != b.report.dump() || a.csv != b.csv) ++mismatches;
    }
  }
  return {runs > 0 && mismatches == 0, std::to_string(runs) + " command pairs, " + std::to_string(mismatches) + " mismatches"};
}

Outcome euler_convergence() {
  const auto F = linear_ball(-Mat::Identity(1, 1), vec1(0), 0.0, 1.0);
  std::vector<double> errors;
  for (int n : {50, 100, 200, 400}) {
    const auto traj = integrate(F, vec1(1.0), TimeGrid(1.0, n), SelectionStrategy::center());
    errors.push_back(std::abs(traj.final()[0] - std::exp(-1.0)));
  }
  bool ok = true;
  std::string detail = "ratios";
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double ratio = errors[i - 1] / errors[i];
    ok = ok && ratio >= 1.8 && ratio <= 2.2;
    detail += " " + std::to_string(ratio);
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "scenarios";
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"formula fidelity", formula_fidelity},
      {"escape envelope suite", escape_suite},
      {"a priori bound on guided scenarios", [&] { return apriori_surrogate(dir); }},
      {"degree axioms", degree_axioms},
      {"anti-periodic benchmark", antiperiodic_benchmark},
      {"multi-point and mean-value zero benchmarks", zero_benchmarks},
      {"continuation suite", continuation_suite},
      {"hypothesis negative tests", negative_tests},
      {"determinism", [&] { return determinism(dir); }},
      {"Euler convergence", euler_convergence},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", index++, name, o.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
