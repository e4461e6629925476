#include "proxama/problem_file.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "proxama/errors.hpp"

namespace proxama {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "proxama-problem/1";

/// A JSON value together with its pointer path, for diagnostics.
class Node {
 public:
  Node(const json& value, std::string path) : v_(value), path_(std::move(path)) {}

  const json& value() const { return v_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError((path_.empty() ? "/" : path_) + ": " + msg, path_.empty() ? "/" : path_);
  }

  void expect_object(std::initializer_list<const char*> allowed) const {
    if (!v_.is_object()) fail("expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : v_.items()) {
      if (!ok.count(key)) child_path_fail(key, "unknown key '" + key + "'");
    }
  }

  bool has(const char* key) const { return v_.is_object() && v_.contains(key); }

  Node at(const char* key) const {
    if (!has(key)) fail(std::string("missing required key '") + key + "'");
    return Node(v_.at(key), path_ + "/" + key);
  }

  Node at(std::size_t i) const { return Node(v_.at(i), path_ + "/" + std::to_string(i)); }

  double number() const {
    if (v_.is_number()) return v_.get<double>();
    if (v_.is_string()) {
      const auto& s = v_.get_ref<const std::string&>();
      if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
      if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    fail("expected a number");
  }

  double finite() const {
    const double x = number();
    if (!std::isfinite(x)) fail("expected a finite number");
    return x;
  }

  int integer() const {
    if (!v_.is_number_integer()) fail("expected an integer");
    return v_.get<int>();
  }

  std::string string() const {
    if (!v_.is_string()) fail("expected a string");
    return v_.get<std::string>();
  }

  Vector vector(bool allow_inf = false) const {
    if (!v_.is_array()) fail("expected an array of numbers");
    Vector out(static_cast<Eigen::Index>(v_.size()));
    for (std::size_t i = 0; i < v_.size(); ++i) {
      out(static_cast<Eigen::Index>(i)) = allow_inf ? at(i).number() : at(i).finite();
    }
    return out;
  }

  Matrix matrix() const {
    expect_object({"rows", "cols", "data"});
    const int rows = at("rows").integer();
    const int cols = at("cols").integer();
    if (rows < 1 || cols < 1) fail("rows and cols must be positive");
    const Node data = at("data");
    if (!data.value().is_array()) data.fail("expected an array of rows");
    if (data.value().size() != static_cast<std::size_t>(rows)) {
      data.fail("has " + std::to_string(data.value().size()) + " rows, expected " +
                std::to_string(rows));
    }
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
      const Node row = data.at(static_cast<std::size_t>(i));
      const Vector r = row.vector();
      if (r.size() != cols) {
        row.fail("row has length " + std::to_string(r.size()) + ", expected " + std::to_string(cols));
      }
      m.row(i) = r.transpose();
    }
    return m;
  }

 private:
  [[noreturn]] void child_path_fail(const std::string& key, const std::string& msg) const {
    const std::string p = path_ + "/" + key;
    throw ParseError(p + ": " + msg, p);
  }

  const json& v_;
  std::string path_;
};

void require_dim(const Node& n, Eigen::Index actual, Eigen::Index expected) {
  if (actual != expected) {
    n.fail("has dimension " + std::to_string(actual) + ", expected " + std::to_string(expected));
  }
}

SeparableFunction parse_function(const Node& n, Eigen::Index dim) {
  if (!n.value().is_object()) n.fail("expected an object");
  const std::string kind = n.at("kind").string();
  try {
    if (kind == "quadratic_distance") {
      n.expect_object({"kind", "d", "weight"});
      const Vector d = n.at("d").vector();
      require_dim(n.at("d"), d.size(), dim);
      const double w = n.has("weight") ? n.at("weight").finite() : 1.0;
      return SeparableFunction::quadratic_distance(d, w);
    }
    if (kind == "l1") {
      n.expect_object({"kind", "weight"});
      return SeparableFunction::l1(dim, n.has("weight") ? n.at("weight").finite() : 1.0);
    }
    if (kind == "box_indicator") {
      n.expect_object({"kind", "lo", "hi"});
      const Vector lo = n.at("lo").vector(true);
      const Vector hi = n.at("hi").vector(true);
      require_dim(n.at("lo"), lo.size(), dim);
      require_dim(n.at("hi"), hi.size(), dim);
      return SeparableFunction::box_indicator(lo, hi);
    }
    if (kind == "zero") {
      n.expect_object({"kind"});
      return SeparableFunction::zero(dim);
    }
    if (kind == "quadratic_form") {
      n.expect_object({"kind", "Q", "q"});
      const Matrix Q = n.at("Q").matrix();
      if (Q.rows() != dim || Q.cols() != dim) n.at("Q").fail("must be " + std::to_string(dim) + "x" + std::to_string(dim));
      const Vector q = n.has("q") ? n.at("q").vector() : Vector::Zero(dim);
      require_dim(n.at("q"), q.size(), dim);
      return SeparableFunction::quadratic_form(LinearMap::dense(Q), q);
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    n.fail(e.what());
  }
  n.at("kind").fail("unknown function kind '" + kind + "'");
}

ScalarSchedule parse_scalar(const Node& n) {
  if (!n.value().is_object()) n.fail("expected an object");
  const std::string kind = n.at("kind").string();
  try {
    if (kind == "constant") {
      n.expect_object({"kind", "value"});
      return ScalarSchedule::constant(n.at("value").finite());
    }
    if (kind == "reciprocal_quadratic" || kind == "reciprocal_sqrt") {
      n.expect_object({"kind", "a", "offset"});
      const double a = n.at("a").finite();
      const double off = n.has("offset") ? n.at("offset").finite() : 0.0;
      return kind == "reciprocal_quadratic" ? ScalarSchedule::reciprocal_quadratic(a, off)
                                            : ScalarSchedule::reciprocal_sqrt(a, off);
    }
    if (kind == "coupled_reciprocal") {
      n.expect_object({"kind", "numerator", "other"});
      return ScalarSchedule::coupled_reciprocal(n.at("numerator").finite(), parse_scalar(n.at("other")));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    n.fail(e.what());
  }
  n.at("kind").fail("unknown schedule kind '" + kind + "'");
}

MetricSchedule parse_metric(const Node& n, Eigen::Index dim, const ScalarSchedule& c,
                            const std::optional<ScalarSchedule>& tau, const LinearMap& B) {
  if (!n.value().is_object()) n.fail("expected an object");
  const std::string kind = n.at("kind").string();
  try {
    if (kind == "zero") {
      n.expect_object({"kind"});
      return MetricSchedule::zero(dim);
    }
    if (kind == "scaled_identity") {
      n.expect_object({"kind", "mu"});
      return MetricSchedule::scaled_identity(dim, parse_scalar(n.at("mu")));
    }
    if (kind == "prox_friendly") {
      n.expect_object({"kind"});
      if (!tau) n.fail("prox_friendly metric needs schedules.tau");
      if (B.dim_in() != dim) n.fail("prox_friendly is only defined for M2");
      return MetricSchedule::prox_friendly(*tau, c, B);
    }
    if (kind == "constant_dense") {
      n.expect_object({"kind", "matrix"});
      const Matrix M = n.at("matrix").matrix();
      if (M.rows() != dim || M.cols() != dim) {
        n.at("matrix").fail("must be " + std::to_string(dim) + "x" + std::to_string(dim));
      }
      return MetricSchedule::constant_dense(LinearMap::dense(M));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    n.fail(e.what());
  }
  n.at("kind").fail("unknown metric kind '" + kind + "'");
}

int line_of_offset(std::string_view text, std::size_t byte) {
  const std::size_t end = std::min(byte, text.size());
  int line = 1;
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

json number_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number_json(v(i)));
  return a;
}

json matrix_json(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) data.push_back(vector_json(m.row(i).transpose()));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

json function_json(const SeparableFunction& f) {
  return std::visit(
      [](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, QuadraticDistance>) {
          return {{"kind", "quadratic_distance"}, {"d", vector_json(k.d)}, {"weight", k.weight}};
        } else if constexpr (std::is_same_v<K, L1Norm>) {
          return {{"kind", "l1"}, {"weight", k.weight}};
        } else if constexpr (std::is_same_v<K, BoxIndicator>) {
          return {{"kind", "box_indicator"}, {"lo", vector_json(k.lo)}, {"hi", vector_json(k.hi)}};
        } else if constexpr (std::is_same_v<K, ZeroFunction>) {
          return {{"kind", "zero"}};
        } else {
          return {{"kind", "quadratic_form"}, {"Q", matrix_json(k.Q.to_dense())}, {"q", vector_json(k.q)}};
        }
      },
      f.kind());
}

json scalar_json(const ScalarSchedule& s) {
  return std::visit(
      [](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ScalarSchedule::Constant>) {
          return {{"kind", "constant"}, {"value", k.value}};
        } else if constexpr (std::is_same_v<K, ScalarSchedule::ReciprocalQuadratic>) {
          return {{"kind", "reciprocal_quadratic"}, {"a", k.a}, {"offset", k.offset}};
        } else if constexpr (std::is_same_v<K, ScalarSchedule::ReciprocalSqrt>) {
          return {{"kind", "reciprocal_sqrt"}, {"a", k.a}, {"offset", k.offset}};
        } else {
          return {{"kind", "coupled_reciprocal"}, {"numerator", k.numerator}, {"other", scalar_json(*k.other)}};
        }
      },
      s.kind());
}

json metric_json(const MetricSchedule& m) {
  return std::visit(
      [](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, MetricSchedule::Zero>) {
          return {{"kind", "zero"}};
        } else if constexpr (std::is_same_v<K, MetricSchedule::ScaledIdentity>) {
          return {{"kind", "scaled_identity"}, {"mu", scalar_json(k.mu)}};
        } else if constexpr (std::is_same_v<K, MetricSchedule::ProxFriendly>) {
          return {{"kind", "prox_friendly"}};
        } else {
          return {{"kind", "constant_dense"}, {"matrix", matrix_json(k.M.to_dense())}};
        }
      },
      m.kind());
}

json optional_json(const std::optional<double>& x) { return x ? number_json(*x) : json(nullptr); }

json residual_json(const KktResidual& r) {
  return {{"kkt_rx", number_json(r.r_x)}, {"kkt_rz", number_json(r.r_z)},
          {"feasibility", number_json(r.r_feas)}};
}

ProblemFile parse_document(const json& doc) {
  const Node root(doc, "");
  root.expect_object({"format", "name", "functions", "operators", "b", "schedules", "initial", "solver"});
  if (root.has("format") && root.at("format").string() != kFormat) {
    root.at("format").fail(std::string("unsupported format, expected '") + kFormat + "'");
  }
  const std::string name = root.has("name") ? root.at("name").string() : std::string();

  const Node ops = root.at("operators");
  ops.expect_object({"A", "B"});
  const Matrix A = ops.at("A").matrix();
  const Matrix B = ops.at("B").matrix();
  if (B.rows() != A.rows()) ops.at("B").fail("must have as many rows as A (" + std::to_string(A.rows()) + ")");
  const Eigen::Index nx = A.cols();
  const Eigen::Index nz = B.cols();
  const Eigen::Index ny = A.rows();

  const Vector b = root.at("b").vector();
  require_dim(root.at("b"), b.size(), ny);

  const Node fns = root.at("functions");
  fns.expect_object({"f", "h1", "g", "h2"});
  SeparableFunction f = parse_function(fns.at("f"), nx);
  SeparableFunction h1 = fns.has("h1") ? parse_function(fns.at("h1"), nx) : SeparableFunction::zero(nx);
  SeparableFunction g = parse_function(fns.at("g"), nz);
  SeparableFunction h2 = fns.has("h2") ? parse_function(fns.at("h2"), nz) : SeparableFunction::zero(nz);

  const LinearMap Amap = LinearMap::dense(A);
  const LinearMap Bmap = LinearMap::dense(B);
  std::optional<TwoBlockProblem> problem;
  try {
    problem.emplace(std::move(f), std::move(h1), std::move(g), std::move(h2), Amap, Bmap, b);
  } catch (const std::exception& e) {
    root.fail(e.what());
  }

  const Node sch = root.at("schedules");
  sch.expect_object({"c", "tau", "M1", "M2"});
  ScalarSchedule c = parse_scalar(sch.at("c"));
  std::optional<ScalarSchedule> tau;
  if (sch.has("tau")) tau = parse_scalar(sch.at("tau"));
  MetricSchedule m1 = sch.has("M1") ? parse_metric(sch.at("M1"), nx, c, tau, LinearMap::zero(1))
                                    : MetricSchedule::zero(nx);
  MetricSchedule m2 = sch.has("M2") ? parse_metric(sch.at("M2"), nz, c, tau, problem->B())
                                    : MetricSchedule::zero(nz);

  PrimalDualState init{Vector::Zero(nx), Vector::Zero(nz), Vector::Zero(ny), 0.0};
  if (root.has("initial")) {
    const Node in = root.at("initial");
    in.expect_object({"x", "z", "y"});
    if (in.has("x")) init.x = in.at("x").vector();
    if (in.has("z")) init.z = in.at("z").vector();
    if (in.has("y")) init.y = in.at("y").vector();
    require_dim(in.has("x") ? in.at("x") : in, init.x.size(), nx);
    require_dim(in.has("z") ? in.at("z") : in, init.z.size(), nz);
    require_dim(in.has("y") ? in.at("y") : in, init.y.size(), ny);
  }

  SolverSettings solver;
  if (root.has("solver")) {
    const Node s = root.at("solver");
    s.expect_object({"max_iters", "tol", "step", "horizon", "record_every"});
    if (s.has("max_iters")) solver.max_iters = s.at("max_iters").integer();
    if (s.has("tol")) solver.tol = s.at("tol").finite();
    if (s.has("step")) solver.step = s.at("step").finite();
    if (s.has("horizon")) solver.horizon = s.at("horizon").finite();
    if (s.has("record_every")) solver.record_every = s.at("record_every").integer();
    if (solver.max_iters < 0) s.at("max_iters").fail("must be >= 0");
    if (!(solver.tol > 0)) s.at("tol").fail("must be positive");
    if (!(solver.step > 0 && solver.step <= 1)) s.at("step").fail("must lie in (0, 1]");
    if (!(solver.horizon > 0)) s.at("horizon").fail("must be positive");
    if (solver.record_every < 1) s.at("record_every").fail("must be >= 1");
  }

  return ProblemFile{name, std::move(*problem), std::move(c), std::move(tau), std::move(m1),
                     std::move(m2), std::move(init), solver};
}

}  // namespace

bool ProblemFile::prox_friendly() const {
  return std::holds_alternative<MetricSchedule::Zero>(m1.kind()) &&
         std::holds_alternative<MetricSchedule::ProxFriendly>(m2.kind());
}

ProblemFile parse_problem_file(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const int line = line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("line " + std::to_string(line) + ": " + e.what(), "/", line);
  }
  return parse_document(doc);
}

ProblemFile load_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open problem file '" + path + "'", "/");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_file(buf.str());
}

json to_json(const ProblemFile& file) {
  const auto& p = file.problem;
  json doc;
  doc["format"] = kFormat;
  if (!file.name.empty()) doc["name"] = file.name;
  doc["functions"] = {{"f", function_json(p.f())},
                      {"h1", function_json(p.h1())},
                      {"g", function_json(p.g())},
                      {"h2", function_json(p.h2())}};
  doc["operators"] = {{"A", matrix_json(p.A().to_dense())}, {"B", matrix_json(p.B().to_dense())}};
  doc["b"] = vector_json(p.b());
  json sch = {{"c", scalar_json(file.c)}, {"M1", metric_json(file.m1)}, {"M2", metric_json(file.m2)}};
  if (file.tau) sch["tau"] = scalar_json(*file.tau);
  doc["schedules"] = sch;
  doc["initial"] = {{"x", vector_json(file.initial.x)},
                    {"z", vector_json(file.initial.z)},
                    {"y", vector_json(file.initial.y)}};
  doc["solver"] = {{"max_iters", file.solver.max_iters},
                   {"tol", file.solver.tol},
                   {"step", file.solver.step},
                   {"horizon", file.solver.horizon},
                   {"record_every", file.solver.record_every}};
  return doc;
}

std::string serialize_problem_file(const ProblemFile& file) { return to_json(file).dump(2) + "\n"; }

json to_json(const PrimalDualState& s) {
  return {{"t", number_json(s.t)}, {"x", vector_json(s.x)}, {"z", vector_json(s.z)}, {"y", vector_json(s.y)}};
}

json to_json(const ValidationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json entry = {{"rule", c.rule},
                  {"passed", c.passed},
                  {"witness", number_json(c.witness)},
                  {"threshold", number_json(c.threshold)}};
    if (!c.detail.empty()) entry["detail"] = c.detail;
    checks.push_back(std::move(entry));
  }
  json grid = {{"points", r.grid.size()}};
  if (!r.grid.empty()) {
    grid["first"] = r.grid.front();
    grid["last"] = r.grid.back();
  }
  return {{"passed", r.passed},
          {"mode", r.mode},
          {"eps", r.eps},
          {"grid", grid},
          {"checks", checks},
          {"cweak", r.cweak},
          {"cstrong", r.cstrong},
          {"cstrong_beta", number_json(r.cstrong_beta)}};
}

json to_json(const SummaryReport& r) {
  json doc = {{"status", r.status},
              {"method", r.method},
              {"discrete", r.discrete},
              {"step", r.step},
              {"horizon", r.horizon},
              {"iterations", r.iterations},
              {"samples", r.samples},
              {"tolerance", r.tolerance},
              {"time_to_tolerance", optional_json(r.time_to_tolerance)},
              {"residuals", residual_json(r.final_residual)},
              {"objectives",
               {{"primal", optional_json(r.primal_objective)},
                {"dual", r.dual_objective ? number_json(*r.dual_objective) : json("unavailable")}}}};
  if (r.final_state) doc["final"] = to_json(*r.final_state);
  if (r.energy) {
    const auto& e = *r.energy;
    doc["energy"] = {{"initial", number_json(e.initial)},
                     {"final", number_json(e.final)},
                     {"min", number_json(e.min)},
                     {"max", number_json(e.max)},
                     {"monotone", e.monotone},
                     {"max_violation", number_json(e.max_violation)},
                     {"tail_oscillation", number_json(e.tail_oscillation)}};
  }
  if (r.validation) doc["validation"] = to_json(*r.validation);
  doc["warnings"] = r.warnings;
  if (!r.error.empty()) doc["error"] = r.error;
  return doc;
}

std::string csv_header(const Trajectory& traj) {
  std::string h = traj.discrete ? "k" : "t";
  if (traj.empty()) return h;
  const auto& s = traj.samples.front().state;
  for (Eigen::Index i = 0; i < s.x.size(); ++i) h += ",x" + std::to_string(i + 1);
  for (Eigen::Index i = 0; i < s.z.size(); ++i) h += ",z" + std::to_string(i + 1);
  for (Eigen::Index i = 0; i < s.y.size(); ++i) h += ",y" + std::to_string(i + 1);
  h += ",feas_residual,kkt_rx,kkt_rz";
  const bool energy = std::all_of(traj.samples.begin(), traj.samples.end(),
                                  [](const auto& x) { return x.energy.has_value(); });
  if (energy) h += ",energy";
  return h;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const std::string header = csv_header(traj);
  const bool energy = header.size() >= 7 && header.compare(header.size() - 7, 7, ",energy") == 0;
  out << header << '\n';
  char buf[32];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << buf;
  };
  for (const auto& s : traj.samples) {
    put(s.t);
    for (const Vector* v : {&s.state.x, &s.state.z, &s.state.y}) {
      for (Eigen::Index i = 0; i < v->size(); ++i) {
        out << ',';
        put((*v)(i));
      }
    }
    out << ',';
    put(s.feasibility);
    out << ',';
    put(s.kkt.r_x);
    out << ',';
    put(s.kkt.r_z);
    if (energy) {
      out << ',';
      put(s.energy->energy);
    }
    out << '\n';
  }
  out.flush();
}

}  // namespace proxama
