#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "proxama_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

/// Runs the CLI with stdout to <name>.out, stderr to <name>.err; returns the exit code.
int run(const std::string& args, const std::string& name = "last") {
  const std::string cmd = std::string(PROXAMA_CLI) + " " + args + " > " + path(name + ".out") + " 2> " +
                          path(name + ".err");
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json load(const std::string& file) { return json::parse(slurp(file)); }

void save(const std::string& file, const json& doc) { std::ofstream(file) << doc.dump(2); }

std::string example_file() {
  static const std::string f = [] {
    const std::string p = path("example.json");
    REQUIRE(run("paper-example --c c025 --tc tc099 --emit-problem " + p) == 0);
    return p;
  }();
  return f;
}

std::vector<std::string> state_columns(const std::string& csv, std::size_t rows) {
  std::istringstream in(slurp(csv));
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::string> out;
  while (out.size() < rows && std::getline(in, line)) {
    const auto first = line.find(',');
    std::size_t cut = first;
    for (int i = 0; i < 6; ++i) cut = line.find(',', cut + 1);
    out.push_back(line.substr(first + 1, cut - first - 1));
  }
  return out;
}

}  // namespace

TEST_CASE("cli: validate") {
  CHECK(run("validate " + example_file()) == 0);
  CHECK(load(path("last.out"))["passed"] == true);

  json doc = load(example_file());
  doc["schedules"]["c"] = {{"kind", "reciprocal_quadratic"}, {"a", 1.0}, {"offset", 0.5}};
  doc["schedules"]["tau"]["other"] = doc["schedules"]["c"];
  save(path("too_large_c.json"), doc);
  CHECK(run("validate " + path("too_large_c.json")) == 1);
  bool named = false;
  const json rejected = load(path("last.out"));
  for (const auto& c : rejected["checks"]) named = named || (c["rule"] == "c_range_upper" && c["passed"] == false);
  CHECK(named);

  doc = load(example_file());
  doc["operators"]["A"]["data"][0] = json::array({1.0});
  save(path("bad_row.json"), doc);
  CHECK(run("validate " + path("bad_row.json")) == 2);
  CHECK(slurp(path("last.err")).find("/operators/A/data/0") != std::string::npos);

  std::ofstream(path("syntax.json")) << "{\n\"b\": [0,\n";
  CHECK(run("validate " + path("syntax.json")) == 2);
  CHECK(slurp(path("last.err")).find("line") != std::string::npos);

  CHECK(run("validate " + path("missing.json")) == 2);
  CHECK(run("validate " + example_file() + " --grid 0:0.5:10") == 0);
  CHECK(load(path("last.out"))["grid"]["points"] == 21);
  CHECK(run("validate " + example_file() + " --grid nonsense") == 2);
  CHECK(run("frobnicate") == 2);
}

TEST_CASE("cli: solve prox-ama writes csv and report") {
  const std::string prefix = path("pa");
  CHECK(run("solve " + example_file() + " --mode prox-ama --out-prefix " + prefix) == 0);
  const json rep = load(prefix + ".report.json");
  CHECK(rep["status"] == "converged");
  CHECK(rep["final"]["x"][0].get<double>() == doctest::Approx(0.0).epsilon(1e-4));
  for (int i = 0; i < 2; ++i) CHECK(std::abs(std::abs(rep["final"]["y"][i].get<double>()) - 0.7071) <= 1e-3);
  CHECK(rep["residuals"]["feasibility"].get<double>() < 1e-6);
  CHECK(load(path("last.out")) == rep);
  const std::string csv = slurp(prefix + ".csv");
  CHECK(csv.rfind("k,x1,x2,z1,z2,y1,y2,feas_residual,kkt_rx,kkt_rz\n", 0) == 0);

  // Deterministic: the same run writes the same bytes.
  CHECK(run("solve " + example_file() + " --mode prox-ama --out-prefix " + path("pa2")) == 0);
  CHECK(slurp(path("pa2.csv")) == csv);
  CHECK(slurp(path("pa2.report.json")) == slurp(prefix + ".report.json"));
}

TEST_CASE("cli: euler with step 1 prints the Proximal AMA states byte for byte") {
  CHECK(run("solve " + example_file() + " --mode prox-ama --out-prefix " + path("cmp_pa")) == 0);
  const int iters = load(path("cmp_pa.report.json"))["iterations"];
  CHECK(run("solve " + example_file() + " --mode continuous-euler --step 1 --horizon " + std::to_string(iters) +
            " --out-prefix " + path("cmp_eu")) == 0);
  const auto a = state_columns(path("cmp_pa.csv"), 1000000);
  const auto b = state_columns(path("cmp_eu.csv"), 1000000);
  CHECK(a.size() == static_cast<std::size_t>(iters) + 1);
  CHECK(a == b);
}

TEST_CASE("cli: continuous run with energy") {
  const std::string prefix = path("rk");
  CHECK(run("solve " + example_file() + " --mode continuous-rk4 --horizon 100 --record-every 50 --energy --out-prefix " +
            prefix) == 0);
  const json rep = load(prefix + ".report.json");
  CHECK(rep["status"] == "completed");
  CHECK(rep["energy"]["monotone"] == true);
  std::istringstream csv(slurp(prefix + ".csv"));
  std::string header;
  std::getline(csv, header);
  CHECK(header == "t,x1,x2,z1,z2,y1,y2,feas_residual,kkt_rx,kkt_rz,energy");
}

TEST_CASE("cli: capability, validation and solver failures") {
  json doc = load(example_file());
  doc["functions"]["h1"] = {{"kind", "quadratic_distance"}, {"d", {0, 0}}, {"weight", 0.5}};
  save(path("smooth_h1.json"), doc);
  CHECK(run("solve " + path("smooth_h1.json") + " --mode ama --out-prefix " + path("x")) == 1);
  CHECK(slurp(path("last.err")).find("capability") != std::string::npos);

  // c = 2.5 fails the range rule; --force runs it anyway with a warning.
  doc = load(example_file());
  doc["schedules"]["c"] = {{"kind", "constant"}, {"value", 2.5}};
  doc["schedules"]["tau"] = {{"kind", "constant"}, {"value", 0.1}};
  doc["solver"]["max_iters"] = 50;
  save(path("forced.json"), doc);
  CHECK(run("solve " + path("forced.json") + " --out-prefix " + path("forced")) == 1);
  CHECK_FALSE(fs::exists(path("forced.csv")));
  CHECK(run("solve " + path("forced.json") + " --force --out-prefix " + path("forced")) == 0);
  const json rep = load(path("forced.report.json"));
  REQUIRE(rep["warnings"].size() >= 1);
  CHECK(rep["warnings"][0].get<std::string>().find("FAIL") != std::string::npos);
  CHECK(rep["validation"]["passed"] == false);

  // M2 = 0 with a singular B^*B: the z-subproblem fails on the first step.
  doc = load(example_file());
  doc["schedules"]["M2"] = {{"kind", "zero"}};
  save(path("singular.json"), doc);
  CHECK(run("solve " + path("singular.json") + " --force --out-prefix " + path("singular")) == 3);
  const json srep = load(path("singular.report.json"));
  CHECK(srep["status"] == "error");
  std::istringstream csv(slurp(path("singular.csv")));
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  CHECK(lines == 2);  // header + the initial state
  CHECK(run("solve " + path("singular.json") + " --force --mode continuous-euler --out-prefix " + path("singular_c")) ==
        3);
  CHECK(fs::exists(path("singular_c.csv")));

  // Plain AMA does not need the metric conditions, only the step-size rules.
  CHECK(run("solve " + path("singular.json") + " --mode ama --out-prefix " + path("ama")) == 0);
  CHECK(load(path("ama.report.json"))["status"] == "converged");
}

TEST_CASE("cli: paper-example variants") {
  for (const std::string variant : {"--c c025 --tc tc099", "--c c199 --tc tc025"}) {
    CHECK(run("paper-example " + variant + " --out-prefix " + path("ex")) == 0);
    const json rep = load(path("ex.report.json"));
    CHECK(rep["status"] == "converged");
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(rep["final"]["x"][i].get<double>()) <= 1e-3);
      CHECK(std::abs(rep["final"]["z"][i].get<double>()) <= 1e-3);
      CHECK(std::abs(std::abs(rep["final"]["y"][i].get<double>()) - 0.7071) <= 2e-3);
    }
  }
  CHECK(run("paper-example --c c3 --tc tc099") == 2);
}

TEST_CASE("cli: norm") {
  CHECK(run("norm " + example_file()) == 0);
  const json n = load(path("last.out"));
  CHECK(n["A"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(n["B"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
}
