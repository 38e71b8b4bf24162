#include "nlbvp/problem.hpp"
#include "support.hpp"

#include <doctest.h>

#include <filesystem>
#include <string>

using namespace nlbvp;
using testing_support::Gen;

namespace {

const char* kMinimal = R"([problem]
dimension = 1
horizon = 1.0

[multimap]
family = "linear_ball"
A = [[-1.0]]
b = [[0.5]]
rho = [0.0]

[boundary]
kind = "anti_periodic"
)";

int error_line(const std::string& text, std::string* field = nullptr) {
  try {
    parse_problem(text);
  } catch (const ParseError& e) {
    if (field) *field = e.field();
    return e.line();
  }
  return -1;
}

ProblemSpec random_spec(Gen& gen) {
  ProblemSpec p;
  p.dimension = gen.integer(1, 3);
  const auto n = p.dimension;
  p.horizon = gen.uniform(0.5, 3.0);
  switch (gen.integer(0, 2)) {
    case 0: {
      const double cut = p.horizon * gen.uniform(0.2, 0.8);
      p.multimap = LinearBall{gen.matrix(n, -2, 2), PiecewiseConstant<Vec>({cut}, {gen.vector(n, -1, 1), gen.vector(n, -1, 1)}),
                              PiecewiseConstant<double>({cut}, {gen.uniform(0, 1), gen.uniform(0, 1)})};
      break;
    }
    case 1:
      p.multimap = AffineHull{{gen.matrix(n, -1, 1), gen.matrix(n, -1, 1)}, {gen.vector(n, -1, 1), gen.vector(n, -1, 1)}};
      break;
    default:
      if (n == 1) p.multimap = Relay{gen.uniform(0.1, 3.0)};
      else p.multimap = AffineHull{{gen.matrix(n, -1, 1)}, {gen.vector(n, -1, 1)}};
  }
  if (gen.integer(0, 1) == 0) p.potential = Radial{{0.0, gen.uniform(0.5, 2.0), gen.uniform(0.0, 1.0)}};
  else p.potential = Quadratic{Mat::Identity(n, n) * gen.uniform(0.5, 2.0)};
  switch (gen.integer(0, 3)) {
    case 0: p.boundary = AntiPeriodic{}; break;
    case 1: p.boundary = MultiPoint{{gen.uniform(-0.4, 0.4), gen.uniform(-0.4, 0.4)}, {p.horizon * 0.25, p.horizon}}; break;
    case 2: p.boundary = MeanValue{RadialClamp{gen.uniform(0, 1)}}; break;
    default: p.boundary = AffineEval{{gen.matrix(n, -1, 1)}, {p.horizon * gen.uniform(0, 1)}, gen.vector(n, -1, 1)};
  }
  p.side = gen.integer(0, 1) ? Side::terminal : Side::initial;
  p.solver.method = static_cast<Method>(gen.integer(0, 2));
  p.solver.tol_bc = gen.uniform(1e-10, 1e-4);
  p.solver.grid_n = gen.integer(10, 20000);
  p.solver.seed = (static_cast<std::uint64_t>(gen.integer(0, 1 << 30)) << 33) | 0x8000000000000001ULL;
  p.solver.strategy = static_cast<StrategyKind>(gen.integer(0, 4));
  p.solver.sign = gen.integer(0, 1) ? 1 : -1;
  if (gen.integer(0, 1)) {
    p.solver.box_lower = gen.vector(n, -3, -1);
    p.solver.box_upper = gen.vector(n, 1, 3);
  }
  if (gen.integer(0, 1)) p.solver.initial_guess = gen.vector(n, -1, 1);
  p.guiding.R_max = gen.uniform(1, 20);
  p.verify.monotone_samples = gen.integer(1, 5000);
  if (gen.integer(0, 1)) p.bounds.c = gen.uniform(0, 1);
  if (gen.integer(0, 1)) {
    DegreeSpec d;
    d.domain = BallDomain{gen.vector(n, -1, 1), gen.uniform(0.5, 2)};
    d.depth = gen.integer(0, 6);
    d.field = AffineField{gen.matrix(n, -1, 1), gen.vector(n, -1, 1)};
    p.degree = d;
  }
  if (gen.integer(0, 1)) p.output_dir = "out dir";
  return p;
}

}  // namespace

TEST_CASE("bundled scenarios round-trip") {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(NLBVP_SCENARIOS)) {
    if (entry.path().extension() != ".toml") continue;
    ProblemSpec p;
    try {
      p = load_problem(entry.path().string());
    } catch (const ParseError&) {
      continue;  // deliberately invalid scenario
    }
    CAPTURE(entry.path().string());
    const auto text = serialize_problem(p);
    CHECK(parse_problem(text) == p);
    CHECK(serialize_problem(parse_problem(text)) == text);
    ++count;
  }
  CHECK(count >= 8);
}

TEST_CASE("property: generated specs round-trip") {
  Gen gen(2024);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_spec(gen);
    const auto text = serialize_problem(p);
    ProblemSpec q;
    REQUIRE_NOTHROW(q = parse_problem(text));
    CHECK(q == p);
  }
}

TEST_CASE("minimal problem and defaults") {
  const auto p = parse_problem(kMinimal);
  CHECK(p.dimension == 1);
  CHECK(p.solver.method == Method::shooting);
  CHECK(p.solver.grid_n == 10000);
  CHECK(p.solver.strategy == StrategyKind::center);
  CHECK(p.side == Side::initial);
  CHECK_FALSE(p.potential.has_value());
  CHECK(p.make_map().dimension() == 1);
  CHECK(p.make_boundary().side() == Side::initial);
}

TEST_CASE("full 64-bit seeds survive") {
  const auto p = parse_problem(std::string(kMinimal) + "\n[solver]\nseed = 18446744073709551615\n");
  CHECK(p.solver.seed == 18446744073709551615ULL);
  CHECK(parse_problem(serialize_problem(p)).solver.seed == 18446744073709551615ULL);
}

TEST_CASE("multi-line arrays and comments") {
  const std::string text = R"([problem]
dimension = 2   # plane
horizon = 2.0
[multimap]
family = "linear_ball"
A = [
  [-1.0, 0.0],
  [0.0, -1.0],
]
b = [[0.0, 0.0]]
rho = [0.25]
[boundary]
kind = "mean_value"
h = "radial_clamp"
scale = 0.5
)";
  const auto p = parse_problem(text);
  const auto& lb = std::get<LinearBall>(*p.multimap);
  CHECK(lb.A == -Mat::Identity(2, 2));
  CHECK(p.horizon == 2.0);
}

TEST_CASE("errors name line and field") {
  std::string field;
  CHECK(error_line(std::string(kMinimal) + "[solver]\nwobble = 3\n", &field) == 14);
  CHECK(field == "solver.wobble");
  CHECK(error_line(std::string(kMinimal) + "[nowhere]\n", &field) == 13);
  CHECK(error_line("[problem]\ndimension = \"two\"\n", &field) == 2);
  CHECK(field == "problem.dimension");
  CHECK(error_line("[problem]\ndimension = 1\nhorizon = -1\n", &field) == 3);
  CHECK(error_line("[problem]\ndimension = [1, 2\n") == 2);
  CHECK(error_line(std::string(kMinimal) + "[solver]\nmethod = \"newton\"\n", &field) == 14);
  CHECK(field == "solver.method");
}

TEST_CASE("invalid boundary constraints are parse errors") {
  const std::string text = R"([problem]
dimension = 1
horizon = 1.0
[boundary]
kind = "multi_point"
alphas = [0.5, 0.5]
times = [0.5, 1.0]
)";
  try {
    parse_problem(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
    CHECK(e.field().rfind("boundary", 0) == 0);
  }
  std::string field;
  CHECK(error_line("[problem]\ndimension = 1\n", &field) >= 0);
  CHECK(field == "problem.horizon");
  CHECK_THROWS_AS(parse_problem("[problem]\ndimension = 1\nhorizon = 1.0\n[multimap]\nfamily = \"relay\"\nk = -1\n"), ParseError);
}

TEST_CASE("missing modules are configuration errors") {
  const auto p = parse_problem("[problem]\ndimension = 1\nhorizon = 1.0\n");
  CHECK_THROWS_AS(p.make_map(), ConfigError);
  CHECK_THROWS_AS(p.make_boundary(), ConfigError);
}
