#include "nlbvp/problem.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace nlbvp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ---- document model ------------------------------------------------------

struct Value {
  enum class Type { number, string, boolean, array };
  Type type = Type::number;
  std::string raw;  // number token or string contents
  double number = 0.0;
  bool boolean = false;
  std::vector<Value> items;
};

struct Entry {
  Value value;
  int line = 0;
  bool used = false;
};

struct Section {
  int line = 0;
  std::map<std::string, Entry> entries;
};

using Document = std::map<std::string, Section>;

class Reader {
 public:
  Reader(const std::string& text, int line) : s_(text), line_(line) {}

  Value parse_value() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '[') return parse_array();
    if (c == '"') return parse_string();
    return parse_scalar();
  }

  void expect_end() {
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters after value");
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, "", what); }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r')) ++pos_;
  }

  Value parse_array() {
    Value v;
    v.type = Value::Type::array;
    ++pos_;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return v;
    }
    for (;;) {
      v.items.push_back(parse_value());
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated array");
      if (s_[pos_] == ',') {
        ++pos_;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ']') {
          ++pos_;
          return v;
        }
        continue;
      }
      if (s_[pos_] == ']') {
        ++pos_;
        return v;
      }
      fail("expected ',' or ']' in array");
    }
  }

  Value parse_string() {
    Value v;
    v.type = Value::Type::string;
    ++pos_;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\') fail("escape sequences are not supported in strings");
      v.raw.push_back(s_[pos_++]);
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return v;
  }

  Value parse_scalar() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != ' ' && s_[pos_] != '\t' &&
           s_[pos_] != '\n' && s_[pos_] != '\r')
      ++pos_;
    Value v;
    v.raw = s_.substr(start, pos_ - start);
    if (v.raw == "true" || v.raw == "false") {
      v.type = Value::Type::boolean;
      v.boolean = v.raw == "true";
      return v;
    }
    std::string token = v.raw;
    if (!token.empty() && token.front() == '+') token.erase(0, 1);
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, v.number);
    if (ec != std::errc() || ptr != last || token.empty()) fail("invalid value '" + v.raw + "'");
    if (!std::isfinite(v.number)) fail("non-finite number '" + v.raw + "'");
    return v;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_;
};

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int bracket_balance(const std::string& s) {
  int depth = 0;
  bool in_string = false;
  for (char c : s) {
    if (c == '"') in_string = !in_string;
    if (in_string) continue;
    if (c == '[') ++depth;
    if (c == ']') --depth;
  }
  return depth;
}

Document parse_document(const std::string& text) {
  Document doc;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  Section* current = nullptr;
  std::string current_name;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "", "malformed section header");
      current_name = trim(line.substr(1, line.size() - 2));
      if (current_name.empty()) throw ParseError(line_no, "", "empty section name");
      if (doc.count(current_name)) throw ParseError(line_no, current_name, "duplicate section");
      current = &doc[current_name];
      current->line = line_no;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "", "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(line_no, "", "missing key");
    if (!current) throw ParseError(line_no, key, "key outside of any section");
    const std::string field = current_name + "." + key;
    std::string value_text = trim(line.substr(eq + 1));
    const int start_line = line_no;
    while (bracket_balance(value_text) > 0) {
      if (!std::getline(in, raw)) throw ParseError(start_line, field, "unterminated array");
      ++line_no;
      value_text += "\n" + trim(strip_comment(raw));
    }
    if (current->entries.count(key)) throw ParseError(start_line, field, "duplicate key");
    Entry entry;
    entry.line = start_line;
    try {
      Reader reader(value_text, start_line);
      entry.value = reader.parse_value();
      reader.expect_end();
    } catch (const ParseError& e) {
      throw ParseError(start_line, field, e.what());
    }
    current->entries.emplace(key, std::move(entry));
  }
  return doc;
}

// ---- typed extraction ----------------------------------------------------

class SectionView {
 public:
  SectionView(Document& doc, std::string name) : name_(std::move(name)) {
    auto it = doc.find(name_);
    if (it != doc.end()) section_ = &it->second;
  }

  bool present() const { return section_ != nullptr; }
  int line() const { return section_ ? section_->line : 0; }
  bool has(const std::string& key) const { return section_ && section_->entries.count(key); }
  std::string field(const std::string& key) const { return name_ + "." + key; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    int line = section_ ? section_->line : 0;
    if (has(key)) line = section_->entries.at(key).line;
    throw ParseError(line, field(key), what);
  }

  const Value& get(const std::string& key) {
    if (!has(key)) fail(key, "missing required key");
    auto& e = section_->entries.at(key);
    e.used = true;
    return e.value;
  }

  double number(const std::string& key) { return as_number(key, get(key)); }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const double v = number(key);
    if (v != std::floor(v) || std::abs(v) > 2147483647.0) fail(key, "expected an integer");
    return static_cast<int>(v);
  }

  std::uint64_t u64(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const Value& v = get(key);
    std::uint64_t out = 0;
    const char* first = v.raw.data();
    const char* last = first + v.raw.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (v.type != Value::Type::number || ec != std::errc() || ptr != last)
      fail(key, "expected an unsigned 64-bit integer");
    return out;
  }

  std::string string(const std::string& key) {
    const Value& v = get(key);
    if (v.type != Value::Type::string) fail(key, "expected a quoted string");
    return v.raw;
  }
  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const Value& v = get(key);
    if (v.type != Value::Type::boolean) fail(key, "expected true or false");
    return v.boolean;
  }

  std::vector<double> list(const std::string& key) { return as_list(key, get(key)); }
  std::vector<double> list(const std::string& key, std::vector<double> fallback) {
    return has(key) ? list(key) : fallback;
  }

  Vec vec(const std::string& key, Eigen::Index n) { return as_vec(key, get(key), n); }

  Mat mat(const std::string& key, Eigen::Index n) { return as_mat(key, get(key), n); }

  std::vector<Vec> vec_list(const std::string& key, Eigen::Index n) {
    const Value& v = get(key);
    if (v.type != Value::Type::array) fail(key, "expected an array of vectors");
    std::vector<Vec> out;
    for (const auto& item : v.items) out.push_back(as_vec(key, item, n));
    return out;
  }

  std::vector<Mat> mat_list(const std::string& key, Eigen::Index n) {
    const Value& v = get(key);
    if (v.type != Value::Type::array) fail(key, "expected an array of matrices");
    std::vector<Mat> out;
    for (const auto& item : v.items) out.push_back(as_mat(key, item, n));
    return out;
  }

  std::vector<std::vector<double>> rows(const std::string& key) {
    const Value& v = get(key);
    if (v.type != Value::Type::array) fail(key, "expected an array of arrays");
    std::vector<std::vector<double>> out;
    for (const auto& item : v.items) out.push_back(as_list(key, item));
    return out;
  }

  void reject_unused() const {
    if (!section_) return;
    for (const auto& [key, e] : section_->entries)
      if (!e.used) throw ParseError(e.line, field(key), "unknown key");
  }

 private:
  double as_number(const std::string& key, const Value& v) const {
    if (v.type != Value::Type::number) fail(key, "expected a number");
    return v.number;
  }

  std::vector<double> as_list(const std::string& key, const Value& v) const {
    if (v.type != Value::Type::array) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& item : v.items) out.push_back(as_number(key, item));
    return out;
  }

  Vec as_vec(const std::string& key, const Value& v, Eigen::Index n) const {
    if (v.type == Value::Type::number && n == 1) return Vec::Constant(1, v.number);
    const auto xs = as_list(key, v);
    if (static_cast<Eigen::Index>(xs.size()) != n) fail(key, "expected a vector of length " + std::to_string(n));
    return Eigen::Map<const Vec>(xs.data(), n);
  }

  Mat as_mat(const std::string& key, const Value& v, Eigen::Index n) const {
    if (v.type == Value::Type::number && n == 1) return Mat::Constant(1, 1, v.number);
    if (v.type != Value::Type::array || static_cast<Eigen::Index>(v.items.size()) != n)
      fail(key, "expected an " + std::to_string(n) + " x " + std::to_string(n) + " matrix");
    Mat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m.row(i) = as_vec(key, v.items[static_cast<std::size_t>(i)], n).transpose();
    return m;
  }

  std::string name_;
  Section* section_ = nullptr;
};

std::optional<StrategyKind> strategy_from_string(const std::string& s) {
  if (s == "center") return StrategyKind::center;
  if (s == "random") return StrategyKind::random;
  if (s == "extremal_max") return StrategyKind::extremal_max;
  if (s == "extremal_min") return StrategyKind::extremal_min;
  if (s == "filtered") return StrategyKind::filtered;
  return std::nullopt;
}

bool same_opt_vec(const std::optional<Vec>& a, const std::optional<Vec>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->size() == b->size() && *a == *b;
}

bool same_vec(const Vec& a, const Vec& b) { return a.size() == b.size() && a == b; }

bool same_domain(const Domain& a, const Domain& b) {
  if (a.index() != b.index()) return false;
  if (const auto* x = std::get_if<Box>(&a)) {
    const auto& y = std::get<Box>(b);
    return same_vec(x->lower, y.lower) && same_vec(x->upper, y.upper);
  }
  const auto& x = std::get<BallDomain>(a);
  const auto& y = std::get<BallDomain>(b);
  return same_vec(x.center, y.center) && x.radius == y.radius;
}

// ---- section readers -----------------------------------------------------

MapFamily read_multimap(SectionView& s, Eigen::Index n) {
  const std::string family = s.string("family");
  if (family == "linear_ball") {
    LinearBall f;
    f.A = s.mat("A", n);
    const auto breaks = s.list("breakpoints", {});
    std::vector<Vec> b;
    if (s.has("b")) {
      b = s.vec_list("b", n);
    } else {
      b.assign(breaks.size() + 1, Vec::Zero(n));
    }
    std::vector<double> rho = s.has("rho") ? s.list("rho") : std::vector<double>(breaks.size() + 1, 0.0);
    f.b = PiecewiseConstant<Vec>(breaks, b);
    f.rho = PiecewiseConstant<double>(breaks, rho);
    return f;
  }
  if (family == "affine_hull") {
    AffineHull f;
    f.A = s.mat_list("matrices", n);
    f.b = s.has("offsets") ? s.vec_list("offsets", n) : std::vector<Vec>(f.A.size(), Vec::Zero(n));
    return f;
  }
  if (family == "relay") return Relay{s.number("k")};
  s.fail("family", "unknown family '" + family + "' (linear_ball, affine_hull, relay)");
}

PotentialFamily read_potential(SectionView& s, Eigen::Index n) {
  const std::string family = s.string("family");
  if (family == "radial") return Radial{s.list("coeffs")};
  if (family == "quadratic") return Quadratic{s.mat("A", n)};
  s.fail("family", "unknown family '" + family + "' (radial, quadratic)");
}

BoundaryKind read_boundary(SectionView& s, Eigen::Index n) {
  const std::string kind = s.string("kind");
  if (kind == "anti_periodic") return AntiPeriodic{};
  if (kind == "multi_point") return MultiPoint{s.list("alphas"), s.list("times")};
  if (kind == "mean_value") {
    const std::string h = s.string("h");
    if (h == "linear") return MeanValue{LinearMap{s.mat("C", n)}};
    if (h == "radial_clamp") return MeanValue{RadialClamp{s.number("scale")}};
    s.fail("h", "unknown h '" + h + "' (linear, radial_clamp)");
  }
  if (kind == "affine_eval") {
    AffineEval g;
    g.matrices = s.mat_list("matrices", n);
    g.times = s.list("times");
    g.offset = s.has("offset") ? s.vec("offset", n) : Vec(Vec::Zero(n));
    return g;
  }
  s.fail("kind", "unknown kind '" + kind + "' (anti_periodic, multi_point, mean_value, affine_eval)");
}

FieldSpec read_field(SectionView& s, Eigen::Index n) {
  const std::string field = s.string("field");
  if (field == "affine") {
    AffineField f;
    f.A = s.mat("A", n);
    f.b = s.has("b") ? s.vec("b", n) : Vec(Vec::Zero(n));
    return f;
  }
  if (field == "polynomial") {
    PolynomialField p;
    p.components.resize(static_cast<std::size_t>(n));
    for (const auto& row : s.rows("terms")) {
      if (static_cast<Eigen::Index>(row.size()) != n + 2)
        s.fail("terms", "each term is [component, coefficient, e1, ..., eN]");
      const double comp = row[0];
      if (comp != std::floor(comp) || comp < 0 || comp >= static_cast<double>(n))
        s.fail("terms", "component index must be an integer in [0, N)");
      Monomial m;
      m.coefficient = row[1];
      for (Eigen::Index j = 0; j < n; ++j) {
        const double e = row[static_cast<std::size_t>(j + 2)];
        if (e != std::floor(e) || e < 0 || e > 64) s.fail("terms", "exponents must be integers in [0, 64]");
        m.exponents.push_back(static_cast<int>(e));
      }
      p.components[static_cast<std::size_t>(comp)].push_back(std::move(m));
    }
    return p;
  }
  s.fail("field", "unknown field '" + field + "' (affine, polynomial)");
}

// ---- serialization -------------------------------------------------------

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string list_text(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + num(xs[i]);
  return out + "]";
}

std::string vec_text(const Vec& v) { return list_text(std::vector<double>(v.data(), v.data() + v.size())); }

std::string mat_text(const Mat& m) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) out += (i ? ", " : "") + vec_text(m.row(i).transpose());
  return out + "]";
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F f) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + f(xs[i]);
  return out + "]";
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

ParseError::ParseError(int line, std::string field, const std::string& message)
    : Error("line " + std::to_string(line) + (field.empty() ? "" : ", field " + field) + ": " + message),
      line_(line),
      field_(std::move(field)) {}

const char* to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::center: return "center";
    case StrategyKind::random: return "random";
    case StrategyKind::extremal_max: return "extremal_max";
    case StrategyKind::extremal_min: return "extremal_min";
    case StrategyKind::filtered: return "filtered";
  }
  return "";
}

bool SolverSpec::operator==(const SolverSpec& o) const {
  return method == o.method && tol_bc == o.tol_bc && tol_dyn == o.tol_dyn && grid_n == o.grid_n && seed == o.seed &&
         lambda_steps == o.lambda_steps && max_iter == o.max_iter && sign == o.sign && strategy == o.strategy &&
         same_opt_vec(box_lower, o.box_lower) && same_opt_vec(box_upper, o.box_upper) &&
         multistart == o.multistart && newton_max_iter == o.newton_max_iter &&
         degree_certificate == o.degree_certificate && degree_depth == o.degree_depth &&
         same_opt_vec(initial_guess, o.initial_guess);
}

bool DegreeSpec::operator==(const DegreeSpec& o) const {
  return same_domain(domain, o.domain) && depth == o.depth && field == o.field;
}

bool ProblemSpec::operator==(const ProblemSpec& o) const {
  return dimension == o.dimension && horizon == o.horizon && multimap == o.multimap && potential == o.potential &&
         boundary == o.boundary && side == o.side && solver == o.solver && guiding == o.guiding &&
         verify == o.verify && bounds == o.bounds && degree == o.degree && output_dir == o.output_dir;
}

MultiMap ProblemSpec::make_map() const {
  if (!multimap) throw ConfigError("problem has no [multimap] section");
  return MultiMap(dimension, horizon, *multimap);
}

BoundaryFunctional ProblemSpec::make_boundary() const {
  if (!boundary) throw ConfigError("problem has no [boundary] section");
  return BoundaryFunctional(dimension, horizon, *boundary, side);
}

std::optional<Potential> ProblemSpec::make_potential() const {
  if (!potential) return std::nullopt;
  return Potential(dimension, *potential);
}

GuidingGrid ProblemSpec::guiding_grid() const {
  return GuidingGrid{guiding.R_max, guiding.radial_steps, guiding.directions_per_side, guiding.time_steps};
}

ProblemSpec parse_problem(const std::string& text) {
  Document doc = parse_document(text);
  for (const auto& [name, section] : doc) {
    static const char* known[] = {"problem", "multimap", "potential", "boundary", "solver",
                                  "guiding", "verify",   "bounds",    "degree",   "output"};
    bool ok = false;
    for (const char* k : known) ok = ok || name == k;
    if (!ok) throw ParseError(section.line, name, "unknown section");
  }

  ProblemSpec p;
  SectionView problem(doc, "problem");
  if (!problem.present()) throw ParseError(0, "problem", "missing [problem] section");
  const int dim = problem.integer("dimension", 0);
  if (dim < 1 || dim > 4) problem.fail("dimension", "dimension must be an integer in [1, 4]");
  p.dimension = dim;
  p.horizon = problem.number("horizon");
  if (!(p.horizon > 0.0)) problem.fail("horizon", "horizon must be > 0");
  problem.reject_unused();
  const Eigen::Index n = p.dimension;

  SectionView mm(doc, "multimap");
  if (mm.present()) {
    p.multimap = read_multimap(mm, n);
    mm.reject_unused();
    try {
      (void)p.make_map();
    } catch (const Error& e) {
      throw ParseError(mm.line(), "multimap", e.what());
    }
  }

  SectionView pot(doc, "potential");
  if (pot.present()) {
    p.potential = read_potential(pot, n);
    pot.reject_unused();
    try {
      (void)p.make_potential();
    } catch (const Error& e) {
      throw ParseError(pot.line(), "potential", e.what());
    }
  }

  SectionView bc(doc, "boundary");
  if (bc.present()) {
    p.boundary = read_boundary(bc, n);
    const std::string side = bc.string("side", "initial");
    if (side == "initial") p.side = Side::initial;
    else if (side == "terminal") p.side = Side::terminal;
    else bc.fail("side", "side must be \"initial\" or \"terminal\"");
    bc.reject_unused();
    try {
      (void)p.make_boundary();
    } catch (const Error& e) {
      throw ParseError(bc.line(), "boundary", e.what());
    }
  }

  SectionView sv(doc, "solver");
  SolverSpec& s = p.solver;
  const std::string method = sv.string("method", to_string(s.method));
  const auto m = method_from_string(method);
  if (!m) sv.fail("method", "unknown method '" + method + "' (fixed_point, shooting, continuation)");
  s.method = *m;
  s.tol_bc = sv.number("tol_bc", s.tol_bc);
  s.tol_dyn = sv.number("tol_dyn", s.tol_dyn);
  s.grid_n = sv.integer("grid_n", s.grid_n);
  if (s.grid_n < 1) sv.fail("grid_n", "grid_n must be >= 1");
  s.seed = sv.u64("seed", s.seed);
  s.lambda_steps = sv.integer("lambda_steps", s.lambda_steps);
  if (s.lambda_steps < 1) sv.fail("lambda_steps", "lambda_steps must be >= 1");
  s.max_iter = sv.integer("max_iter", s.max_iter);
  s.sign = sv.integer("sign", s.sign);
  if (s.sign != 1 && s.sign != -1) sv.fail("sign", "sign must be 1 or -1");
  const std::string strategy = sv.string("strategy", to_string(s.strategy));
  const auto k = strategy_from_string(strategy);
  if (!k) sv.fail("strategy", "unknown strategy '" + strategy + "'");
  s.strategy = *k;
  if (sv.has("box_lower")) s.box_lower = sv.vec("box_lower", n);
  if (sv.has("box_upper")) s.box_upper = sv.vec("box_upper", n);
  if (s.box_lower.has_value() != s.box_upper.has_value()) sv.fail("box_lower", "box_lower and box_upper go together");
  if (s.box_lower && !(s.box_lower->array() < s.box_upper->array()).all())
    sv.fail("box_lower", "box_lower must be below box_upper in every coordinate");
  s.multistart = sv.integer("multistart", s.multistart);
  if (s.multistart < 1) sv.fail("multistart", "multistart must be >= 1");
  s.newton_max_iter = sv.integer("newton_max_iter", s.newton_max_iter);
  s.degree_certificate = sv.boolean("degree_certificate", s.degree_certificate);
  s.degree_depth = sv.integer("degree_depth", s.degree_depth);
  if (sv.has("initial_guess")) s.initial_guess = sv.vec("initial_guess", n);
  sv.reject_unused();

  SectionView gv(doc, "guiding");
  p.guiding.R_max = gv.number("R_max", p.guiding.R_max);
  p.guiding.radial_steps = gv.integer("radial_steps", p.guiding.radial_steps);
  p.guiding.directions_per_side = gv.integer("directions_per_side", p.guiding.directions_per_side);
  p.guiding.time_steps = gv.integer("time_steps", p.guiding.time_steps);
  if (!(p.guiding.R_max > 0.0) || p.guiding.radial_steps < 1 || p.guiding.directions_per_side < 0 ||
      p.guiding.time_steps < 1)
    throw ParseError(gv.line(), "guiding", "degenerate guiding grid");
  gv.reject_unused();

  SectionView vv(doc, "verify");
  p.verify.monotone_samples = vv.integer("monotone_samples", p.verify.monotone_samples);
  p.verify.sphere_samples = vv.integer("sphere_samples", p.verify.sphere_samples);
  p.verify.th6_grid_steps = vv.integer("th6_grid_steps", p.verify.th6_grid_steps);
  p.verify.random_paths = vv.integer("random_paths", p.verify.random_paths);
  p.verify.th6_depth = vv.integer("th6_depth", p.verify.th6_depth);
  vv.reject_unused();

  SectionView bv(doc, "bounds");
  for (const char* key : {"x0_norm", "R", "c", "d"}) {
    if (!bv.has(key)) continue;
    const double v = bv.number(key);
    if (!(v >= 0.0)) bv.fail(key, "must be >= 0");
    std::string k2 = key;
    (k2 == "x0_norm" ? p.bounds.x0_norm : k2 == "R" ? p.bounds.R : k2 == "c" ? p.bounds.c : p.bounds.d) = v;
  }
  bv.reject_unused();

  SectionView dv(doc, "degree");
  if (dv.present()) {
    DegreeSpec d;
    const std::string domain = dv.string("domain", "ball");
    if (domain == "box") {
      d.domain = Box{dv.vec("lower", n), dv.vec("upper", n)};
    } else if (domain == "ball") {
      d.domain = BallDomain{dv.has("center") ? dv.vec("center", n) : Vec(Vec::Zero(n)), dv.number("radius", 1.0)};
    } else {
      dv.fail("domain", "domain must be \"box\" or \"ball\"");
    }
    try {
      validate_domain(d.domain);
    } catch (const Error& e) {
      throw ParseError(dv.line(), "degree.domain", e.what());
    }
    d.depth = dv.integer("depth", d.depth);
    if (d.depth < 0) dv.fail("depth", "depth must be >= 0");
    d.field = read_field(dv, n);
    dv.reject_unused();
    p.degree = std::move(d);
  }

  SectionView ov(doc, "output");
  p.output_dir = ov.string("dir", "");
  ov.reject_unused();
  return p;
}

ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

std::string serialize_problem(const ProblemSpec& p) {
  std::ostringstream o;
  o << "[problem]\n";
  o << "dimension = " << p.dimension << "\n";
  o << "horizon = " << num(p.horizon) << "\n";

  if (p.multimap) {
    o << "\n[multimap]\n";
    std::visit(overloaded{[&](const LinearBall& f) {
                            o << "family = \"linear_ball\"\n";
                            o << "A = " << mat_text(f.A) << "\n";
                            o << "breakpoints = " << list_text(f.b.breakpoints) << "\n";
                            o << "b = " << join(f.b.values, vec_text) << "\n";
                            o << "rho = " << list_text(f.rho.values) << "\n";
                          },
                          [&](const AffineHull& f) {
                            o << "family = \"affine_hull\"\n";
                            o << "matrices = " << join(f.A, mat_text) << "\n";
                            o << "offsets = " << join(f.b, vec_text) << "\n";
                          },
                          [&](const Relay& f) {
                            o << "family = \"relay\"\n";
                            o << "k = " << num(f.k) << "\n";
                          }},
               *p.multimap);
  }

  if (p.potential) {
    o << "\n[potential]\n";
    std::visit(overloaded{[&](const Radial& r) {
                            o << "family = \"radial\"\n";
                            o << "coeffs = " << list_text(r.coeffs) << "\n";
                          },
                          [&](const Quadratic& q) {
                            o << "family = \"quadratic\"\n";
                            o << "A = " << mat_text(q.A) << "\n";
                          }},
               *p.potential);
  }

  if (p.boundary) {
    o << "\n[boundary]\n";
    std::visit(overloaded{[&](const AntiPeriodic&) { o << "kind = \"anti_periodic\"\n"; },
                          [&](const MultiPoint& g) {
                            o << "kind = \"multi_point\"\n";
                            o << "alphas = " << list_text(g.alphas) << "\n";
                            o << "times = " << list_text(g.times) << "\n";
                          },
                          [&](const MeanValue& g) {
                            o << "kind = \"mean_value\"\n";
                            if (const auto* c = std::get_if<LinearMap>(&g.h)) {
                              o << "h = \"linear\"\n";
                              o << "C = " << mat_text(c->C) << "\n";
                            } else {
                              o << "h = \"radial_clamp\"\n";
                              o << "scale = " << num(std::get<RadialClamp>(g.h).scale) << "\n";
                            }
                          },
                          [&](const AffineEval& g) {
                            o << "kind = \"affine_eval\"\n";
                            o << "matrices = " << join(g.matrices, mat_text) << "\n";
                            o << "times = " << list_text(g.times) << "\n";
                            o << "offset = " << vec_text(g.offset) << "\n";
                          }},
               *p.boundary);
    o << "side = " << quoted(p.side == Side::initial ? "initial" : "terminal") << "\n";
  }

  const SolverSpec& s = p.solver;
  o << "\n[solver]\n";
  o << "method = " << quoted(to_string(s.method)) << "\n";
  o << "tol_bc = " << num(s.tol_bc) << "\n";
  o << "tol_dyn = " << num(s.tol_dyn) << "\n";
  o << "grid_n = " << s.grid_n << "\n";
  o << "seed = " << s.seed << "\n";
  o << "lambda_steps = " << s.lambda_steps << "\n";
  o << "max_iter = " << s.max_iter << "\n";
  o << "sign = " << s.sign << "\n";
  o << "strategy = " << quoted(to_string(s.strategy)) << "\n";
  if (s.box_lower) o << "box_lower = " << vec_text(*s.box_lower) << "\n";
  if (s.box_upper) o << "box_upper = " << vec_text(*s.box_upper) << "\n";
  o << "multistart = " << s.multistart << "\n";
  o << "newton_max_iter = " << s.newton_max_iter << "\n";
  o << "degree_certificate = " << (s.degree_certificate ? "true" : "false") << "\n";
  o << "degree_depth = " << s.degree_depth << "\n";
  if (s.initial_guess) o << "initial_guess = " << vec_text(*s.initial_guess) << "\n";

  o << "\n[guiding]\n";
  o << "R_max = " << num(p.guiding.R_max) << "\n";
  o << "radial_steps = " << p.guiding.radial_steps << "\n";
  o << "directions_per_side = " << p.guiding.directions_per_side << "\n";
  o << "time_steps = " << p.guiding.time_steps << "\n";

  o << "\n[verify]\n";
  o << "monotone_samples = " << p.verify.monotone_samples << "\n";
  o << "sphere_samples = " << p.verify.sphere_samples << "\n";
  o << "th6_grid_steps = " << p.verify.th6_grid_steps << "\n";
  o << "random_paths = " << p.verify.random_paths << "\n";
  o << "th6_depth = " << p.verify.th6_depth << "\n";

  if (p.bounds.x0_norm || p.bounds.R || p.bounds.c || p.bounds.d) {
    o << "\n[bounds]\n";
    if (p.bounds.x0_norm) o << "x0_norm = " << num(*p.bounds.x0_norm) << "\n";
    if (p.bounds.R) o << "R = " << num(*p.bounds.R) << "\n";
    if (p.bounds.c) o << "c = " << num(*p.bounds.c) << "\n";
    if (p.bounds.d) o << "d = " << num(*p.bounds.d) << "\n";
  }

  if (p.degree) {
    const DegreeSpec& d = *p.degree;
    o << "\n[degree]\n";
    if (const auto* box = std::get_if<Box>(&d.domain)) {
      o << "domain = \"box\"\n";
      o << "lower = " << vec_text(box->lower) << "\n";
      o << "upper = " << vec_text(box->upper) << "\n";
    } else {
      const auto& ball = std::get<BallDomain>(d.domain);
      o << "domain = \"ball\"\n";
      o << "center = " << vec_text(ball.center) << "\n";
      o << "radius = " << num(ball.radius) << "\n";
    }
    o << "depth = " << d.depth << "\n";
    std::visit(overloaded{[&](const AffineField& f) {
                            o << "field = \"affine\"\n";
                            o << "A = " << mat_text(f.A) << "\n";
                            o << "b = " << vec_text(f.b) << "\n";
                          },
                          [&](const PolynomialField& f) {
                            o << "field = \"polynomial\"\n";
                            o << "terms = [";
                            bool first = true;
                            for (std::size_t c = 0; c < f.components.size(); ++c) {
                              for (const auto& mono : f.components[c]) {
                                std::vector<double> row{static_cast<double>(c), mono.coefficient};
                                for (int e : mono.exponents) row.push_back(e);
                                o << (first ? "" : ", ") << list_text(row);
                                first = false;
                              }
                            }
                            o << "]\n";
                          }},
               d.field);
  }

  if (!p.output_dir.empty()) o << "\n[output]\ndir = " << quoted(p.output_dir) << "\n";
  return o.str();
}

}  // namespace nlbvp
