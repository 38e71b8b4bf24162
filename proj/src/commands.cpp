#include "nlbvp/commands.hpp"

#include <cmath>

namespace nlbvp {

using json = nlohmann::ordered_json;

namespace {

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

template <class T, class F>
json opt_json(const std::optional<T>& v, F f) {
  return v ? f(*v) : json(nullptr);
}

json opt_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json envelope_json(const EnvelopeDiagnostics& e) {
  return json{{"slack", e.slack},
              {"upper_excess", e.upper_excess},
              {"lower_deficit", e.lower_deficit},
              {"worst_upper_index", e.worst_upper},
              {"worst_lower_index", e.worst_lower},
              {"upper_violated", e.upper_violated},
              {"lower_violated", e.lower_violated}};
}

json schauder_json(const SchauderRadius& s) {
  return json{{"paper_radius", s.paper_radius}, {"corrected_radius", opt_number(s.corrected_radius)}};
}

json bounds_json(const BoundSummary& b) {
  return json{{"mu_total", b.mu_total},
              {"gronwall_upper", b.gronwall_upper},
              {"escape_lower", b.escape_lower},
              {"apriori_M", opt_number(b.apriori_M)},
              {"schauder", opt_json(b.schauder, schauder_json)},
              {"g_growth", json{{"c", b.g_growth.c}, {"d", b.g_growth.d}}}};
}

json certificate_json(const GuidingCertificate& c) {
  return json{{"classification", to_string(c.classification)},
              {"R", c.R},
              {"r", c.r},
              {"weak_positive", c.weak_positive},
              {"weak_negative", c.weak_negative},
              {"strict_negative", c.strict_negative},
              {"R_weak_positive", c.R_weak_positive},
              {"R_weak_negative", c.R_weak_negative},
              {"R_strict_negative", c.R_strict_negative},
              {"sample_resolution", c.sample_resolution},
              {"R_max", c.R_max},
              {"points_tested", c.points_tested}};
}

json condition_json(const ConditionResult& c) {
  return json{{"status", to_string(c.status)},
              {"tested", c.tested},
              {"worst", c.worst},
              {"detail", c.detail},
              {"witness", opt_json(c.witness, vec_json)}};
}

json degree_json(const DegreeResult& d) {
  return json{{"value", d.value},
              {"refinement_depth", d.refinement_depth},
              {"boundary_min_norm", d.boundary_min_norm},
              {"simplices", d.simplices}};
}

json error_json(const std::string& kind, const std::string& what) {
  return json{{"error", json{{"kind", kind}, {"message", what}}}};
}

int working_sign(const ProblemSpec& spec) { return spec.side == Side::terminal ? -spec.solver.sign : spec.solver.sign; }

SelectionStrategy make_strategy(const ProblemSpec& spec, const std::optional<Potential>& V,
                                const std::optional<GuidingCertificate>& cert) {
  const auto n = spec.dimension;
  switch (spec.solver.strategy) {
    case StrategyKind::center: return SelectionStrategy::center();
    case StrategyKind::random: return SelectionStrategy::random(spec.solver.seed);
    case StrategyKind::extremal_max:
    case StrategyKind::extremal_min: {
      const auto mode = spec.solver.strategy == StrategyKind::extremal_max ? Extremum::max : Extremum::min;
      if (V) return SelectionStrategy::extremal_gradient(*V, mode);
      return SelectionStrategy::extremal_fixed(Vec::Ones(n), mode);
    }
    case StrategyKind::filtered:
      if (!V || !cert) throw ConfigError("strategy \"filtered\" needs a [potential] section");
      return SelectionStrategy::filtered(*V, working_sign(spec), cert->R);
  }
  return SelectionStrategy::center();
}

SolverOptions make_options(const ProblemSpec& spec) {
  const SolverSpec& s = spec.solver;
  SolverOptions o;
  o.tol_bc = s.tol_bc;
  o.tol_dyn = s.tol_dyn;
  o.max_iter = s.max_iter;
  o.multistart = s.multistart;
  if (s.box_lower) o.box = Box{*s.box_lower, *s.box_upper};
  o.newton_max_iter = s.newton_max_iter;
  o.degree_certificate = s.degree_certificate;
  o.degree_depth = s.degree_depth;
  o.lambda_steps = s.lambda_steps;
  o.initial_guess = s.initial_guess;
  return o;
}

std::optional<GuidingCertificate> guiding_for(const ProblemSpec& spec, const std::optional<Potential>& V,
                                              const MultiMap& map) {
  if (!V) return std::nullopt;
  return classify_guiding(*V, map, spec.guiding_grid());
}

}  // namespace

void apply_overrides(ProblemSpec& spec, const Overrides& o) {
  if (o.seed) spec.solver.seed = *o.seed;
  if (o.grid_n) {
    if (*o.grid_n < 1) throw ParseError(0, "--grid-n", "grid size must be >= 1");
    spec.solver.grid_n = *o.grid_n;
  }
  if (o.method) spec.solver.method = *o.method;
}

CommandResult run_solve(const ProblemSpec& spec) {
  const MultiMap map = spec.make_map();
  const BoundaryFunctional g = spec.make_boundary();
  const auto V = spec.make_potential();
  const TimeGrid grid = make_grid(map, g, spec.solver.grid_n);
  const auto cert = guiding_for(spec, V, map);
  const SolverOptions options = make_options(spec);

  SolveReport rep;
  switch (spec.solver.method) {
    case Method::continuation:
      if (!V || !cert) throw ConfigError("continuation needs a [potential] section");
      rep = solve_continuation(map, g, *V, *cert, spec.solver.sign, grid, options);
      break;
    case Method::fixed_point:
    case Method::shooting: {
      const SelectionStrategy strategy = make_strategy(spec, V, cert);
      try {
        rep = spec.solver.method == Method::fixed_point ? solve_fixed_point(map, g, grid, strategy, options)
                                                        : solve_shooting(map, g, grid, strategy, options);
      } catch (const GuidingViolation& v) {
        rep.method = spec.solver.method;
        rep.time_reversed = spec.side == Side::terminal;
        rep.strategy = strategy.describe();
        rep.violation = GuidingWitness{v.time(), v.state(), v.lambda()};
        rep.message = std::string("aborted: ") + v.what();
        rep.x0 = Vec::Zero(spec.dimension);
      }
      break;
    }
  }

  const Certification c = certify(rep, map, g, spec.solver.tol_bc, spec.solver.tol_dyn);
  CommandResult out;
  out.exit_code = rep.violation ? exit_code::guiding_violation : c.pass ? exit_code::ok : exit_code::unsolved;

  json apriori = nullptr;
  if (cert && cert->strict_negative && rep.solution) {
    const double M = apriori_M(cert->R_strict_negative, map.growth().mu_total());
    const double sup = rep.solution->sup_norm();
    apriori = json{{"R", cert->R_strict_negative}, {"M", M}, {"sup_norm", sup}, {"holds", sup <= M + 1e-6}};
  }

  json path = json::array();
  for (const auto& p : rep.lambda_path)
    path.push_back(json{{"lambda", p.lambda}, {"x0", vec_json(p.x0)}, {"residual_bc", p.residual_bc},
                        {"iterations", p.iterations}});

  out.report = json{
      {"command", "solve"},
      {"method", to_string(rep.method)},
      {"exit_code", out.exit_code},
      {"solved", rep.solved},
      {"certified", c.pass},
      {"time_reversed", rep.time_reversed},
      {"strategy", rep.strategy},
      {"message", rep.message},
      {"dimension", spec.dimension},
      {"horizon", spec.horizon},
      {"grid_n", spec.solver.grid_n},
      {"intervals", grid.intervals()},
      {"seed", spec.solver.seed},
      {"x0", vec_json(rep.x0)},
      {"residual_bc", rep.residual_bc},
      {"residual_dyn", rep.residual_dyn},
      {"iterations", rep.iterations},
      {"sup_norm", rep.solution ? json(rep.solution->sup_norm()) : json(nullptr)},
      {"lambda_path", path},
      {"iterate_count", rep.iterate_history.size()},
      {"stayed_in_invariant_ball", rep.stayed_in_invariant_ball ? json(*rep.stayed_in_invariant_ball) : json(nullptr)},
      {"degree_certificate", rep.degree_certificate ? json(*rep.degree_certificate) : json(nullptr)},
      {"violation", rep.violation ? json{{"t", rep.violation->t},
                                         {"x", vec_json(rep.violation->x)},
                                         {"lambda", rep.violation->lambda}}
                                  : json(nullptr)},
      {"certification", json{{"pass", c.pass},
                             {"residual_bc", c.residual_bc},
                             {"residual_dyn", c.residual_dyn},
                             {"euler_consistent", c.euler_consistent},
                             {"envelope", rep.solution ? envelope_json(c.envelope) : json(nullptr)}}},
      {"bounds", bounds_json(rep.bounds)},
      {"guiding", opt_json(cert, certificate_json)},
      {"apriori_check", apriori},
  };
  if (rep.solution) out.csv = to_csv(*rep.solution);
  return out;
}

CommandResult run_verify(const ProblemSpec& spec) {
  CommandResult out;
  const auto V = spec.make_potential();
  std::optional<MultiMap> map;
  if (spec.multimap) map = spec.make_map();
  std::optional<BoundaryFunctional> g;
  if (spec.boundary) g = spec.make_boundary();

  std::optional<GuidingCertificate> cert;
  json guiding = nullptr;
  if (V && map) {
    cert = classify_guiding(*V, *map, spec.guiding_grid());
    guiding = certificate_json(*cert);
  }

  json potential = nullptr;
  if (V) {
    const MonotoneCheck m = check_monotone(*V, spec.verify.monotone_samples, spec.solver.seed, spec.guiding.R_max);
    json witness = nullptr;
    if (m.witness) witness = json{{"x", vec_json(m.witness->first)}, {"y", vec_json(m.witness->second)}};
    potential = json{{"monotone", m.pass}, {"monotone_witness", witness}, {"coercive", check_coercive(*V)}};
  }

  json growth = nullptr;
  json th4 = nullptr;
  json th6 = nullptr;
  if (g) {
    const GrowthEstimate ge = apply_growth(*g);
    growth = json{{"c", ge.c}, {"d", ge.d}};

    if (V && map && cert) {
      std::vector<Trajectory> candidates;
      std::string note;
      try {
        const CommandResult solved = run_solve(spec);
        (void)solved;
        const TimeGrid grid = make_grid(*map, *g, spec.solver.grid_n);
        const SelectionStrategy strategy = spec.solver.method == Method::continuation
                                               ? SelectionStrategy::filtered(*V, working_sign(spec), cert->R)
                                               : make_strategy(spec, V, cert);
        if (solved.report.at("x0").size() == static_cast<std::size_t>(spec.dimension) &&
            solved.report.at("sup_norm").is_number()) {
          Vec x0(spec.dimension);
          for (Eigen::Index i = 0; i < spec.dimension; ++i) x0[i] = solved.report.at("x0")[static_cast<std::size_t>(i)];
          candidates.push_back(integrate(working_map(*map, *g), x0, grid, strategy));
        }
      } catch (const Error& e) {
        note = e.what();
      }
      try {
        const Th4Report r = check_th4_conditions(*g, *V, *cert, candidates, spec.verify.sphere_samples);
        th4 = json{{"level", r.level},
                   {"i", condition_json(r.i)},
                   {"ii", condition_json(r.ii)},
                   {"iii", condition_json(r.iii)},
                   {"candidates", candidates.size()},
                   {"note", note.empty() ? "condition (i) is checked on solver candidates only" : note}};
      } catch (const Error& e) {
        th4 = error_json("th4", e.what());
      }
    }

    try {
      const Th6Report r = check_th6_conditions(*g, spec.verify.th6_grid_steps, spec.verify.random_paths,
                                               spec.solver.seed, spec.verify.th6_depth);
      th6 = json{{"a", condition_json(r.a)},
                 {"b", condition_json(r.b)},
                 {"liminf_estimate", r.liminf_estimate},
                 {"family", r.family},
                 {"degree", opt_json(r.degree, degree_json)},
                 {"degree_radius", r.degree_radius}};
    } catch (const Error& e) {
      th6 = error_json("th6", e.what());
    }
  }

  out.report = json{{"command", "verify"},
                    {"exit_code", out.exit_code},
                    {"guiding", guiding},
                    {"potential", potential},
                    {"g_growth", growth},
                    {"th4", th4},
                    {"th6", th6}};
  return out;
}

CommandResult run_bounds(const ProblemSpec& spec) {
  CommandResult out;
  double mu_total = 0.0;
  std::optional<MultiMap> map;
  if (spec.multimap) {
    map = spec.make_map();
    mu_total = map->growth().mu_total();
  }
  const double x0_norm = spec.bounds.x0_norm.value_or(0.0);

  std::optional<double> R = spec.bounds.R;
  const auto V = spec.make_potential();
  if (!R && V && map) {
    const GuidingCertificate cert = classify_guiding(*V, *map, spec.guiding_grid());
    if (cert.strict_negative) R = cert.R_strict_negative;
  }

  std::optional<double> c = spec.bounds.c;
  std::optional<double> d = spec.bounds.d;
  if (spec.boundary) {
    const GrowthEstimate ge = apply_growth(spec.make_boundary());
    if (!c) c = ge.c;
    if (!d) d = ge.d;
  }

  json schauder = nullptr;
  if (c && d) {
    if (*c < 1.0) {
      schauder = schauder_json(schauder_radius(*c, *d, mu_total));
    } else {
      schauder = json{{"paper_radius", nullptr}, {"corrected_radius", nullptr}};
    }
  }

  out.report = json{{"command", "bounds"},
                    {"exit_code", out.exit_code},
                    {"inputs", json{{"mu_total", mu_total},
                                    {"x0_norm", x0_norm},
                                    {"R", opt_number(R)},
                                    {"c", opt_number(c)},
                                    {"d", opt_number(d)}}},
                    {"gronwall_upper", gronwall_upper(x0_norm, mu_total)},
                    {"escape_lower", escape_lower(x0_norm, mu_total)},
                    {"apriori_M", R ? json(apriori_M(*R, mu_total)) : json(nullptr)},
                    {"schauder_radius", schauder}};
  return out;
}

CommandResult run_degree(const ProblemSpec& spec) {
  if (!spec.degree) throw ConfigError("problem has no [degree] section");
  CommandResult out;
  const DegreeSpec& d = *spec.degree;
  try {
    const DegreeResult r = brouwer_degree(make_field(d.field), d.domain, d.depth);
    out.report = json{{"command", "degree"}, {"exit_code", out.exit_code}, {"degree", degree_json(r)}};
  } catch (const InconclusiveError& e) {
    out.exit_code = exit_code::degree_inconclusive;
    out.report = json{{"command", "degree"}, {"exit_code", out.exit_code}, {"degree", nullptr}};
    out.report.update(error_json("inconclusive", e.what()));
  } catch (const DegenerateDomainError& e) {
    out.exit_code = exit_code::failure;
    out.report = json{{"command", "degree"}, {"exit_code", out.exit_code}, {"degree", nullptr}};
    out.report.update(error_json("degenerate_domain", e.what()));
  }
  return out;
}

CommandResult run_command(const std::string& command, const std::string& path, const Overrides& overrides) {
  CommandResult out;
  ProblemSpec spec;
  try {
    spec = load_problem(path);
    apply_overrides(spec, overrides);
  } catch (const ParseError& e) {
    out.exit_code = exit_code::parse_error;
    out.report = json{{"command", command}, {"exit_code", out.exit_code}};
    out.report.update(error_json("parse", e.what()));
    return out;
  }
  try {
    if (command == "solve") return run_solve(spec);
    if (command == "verify") return run_verify(spec);
    if (command == "bounds") return run_bounds(spec);
    if (command == "degree") return run_degree(spec);
    throw ConfigError("unknown command '" + command + "'");
  } catch (const ConfigError& e) {
    out.exit_code = exit_code::parse_error;
    out.report = json{{"command", command}, {"exit_code", out.exit_code}};
    out.report.update(error_json("config", e.what()));
  } catch (const Error& e) {
    out.exit_code = exit_code::failure;
    out.report = json{{"command", command}, {"exit_code", out.exit_code}};
    out.report.update(error_json("runtime", e.what()));
  }
  return out;
}

}  // namespace nlbvp
