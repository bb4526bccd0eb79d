#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = qwalk_cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) v.push_back(line);
  return v;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qwalk_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct EnvGuard {
  explicit EnvGuard(const std::string& value) { setenv("QWALK_OUTPUT_DIR", value.c_str(), 1); }
  ~EnvGuard() { unsetenv("QWALK_OUTPUT_DIR"); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("angle parsing") {
  CHECK(qwalk_cli::parse_angle("0.25", 30) == 0.25);
  CHECK(qwalk_cli::parse_angle("pi", 30) == doctest::Approx(kPi));
  CHECK(qwalk_cli::parse_angle("pi/4", 30) == doctest::Approx(kPi / 4));
  CHECK(qwalk_cli::parse_angle("3pi/2", 30) == doctest::Approx(3 * kPi / 2));
  CHECK(qwalk_cli::parse_angle("-pi/3", 30) == doctest::Approx(-kPi / 3));
  CHECK(qwalk_cli::parse_angle("pi/60", 30) == kPi / 60);
  CHECK(qwalk_cli::parse_angle("pi/2N", 30) == kPi / 60);
  CHECK(qwalk_cli::parse_angle("pi/N", 30) == doctest::Approx(kPi / 30));
  CHECK_THROWS(qwalk_cli::parse_angle("tau", 30));
  CHECK_THROWS(qwalk_cli::parse_angle("pi/", 30));
  CHECK_THROWS(qwalk_cli::parse_angle("pi/0", 30));
}

TEST_CASE("simulate csv has one row per double step") {
  const auto r = run({"simulate", "--n", "30", "--lambda", "0.03", "--steps", "120", "--initial-coin",
                      "right", "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 122);
  CHECK(rows[0] == "t,p_source,p_target,p_rest,coin_fidelity");
  CHECK(rows[1].rfind("0,1,0,0,", 0) == 0);
  CHECK(rows[121].rfind("120,", 0) == 0);
}

TEST_CASE("simulate json round trip") {
  const auto r = run({"simulate", "--steps", "60", "--initial-coin", "plus-y"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["meta"]["command"] == "simulate");
  CHECK(doc["meta"]["params"]["n"] == 30);
  CHECK(doc["meta"]["version"] == "0.1.0");
  const auto& data = doc["data"];
  CHECK(data["trace"]["t"].size() == 61);
  CHECK(data["peak_fidelity"].get<double>() >= 0.99);
  // Values re-serialized with 17 digits parse back to the same doubles.
  const auto& p = data["trace"]["p_target"];
  double max = 0.0;
  int at = -1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].get<double>() > max + 1e-12) {
      max = p[i].get<double>();
      at = static_cast<int>(i);
    }
  }
  CHECK(data["peak_time"].get<int>() == at);
  const auto csv = run({"simulate", "--steps", "60", "--initial-coin", "plus-y", "--format", "csv"});
  const auto rows = lines(csv.out);
  std::istringstream row(rows[at + 1]);
  std::string field;
  std::getline(row, field, ',');
  std::getline(row, field, ',');
  std::getline(row, field, ',');
  CHECK(std::stod(field) == data["trace"]["p_target"][at].get<double>());
}

TEST_CASE("output is deterministic and written atomically") {
  const fs::path dir = scratch_dir("determinism");
  const std::vector<std::string> args = {"spectrum", "--n", "30", "--lambda", "0.03", "--format", "json", "--output",
                                         (dir / "a.json").string()};
  REQUIRE(run(args).code == 0);
  auto second = args;
  second.back() = (dir / "b.json").string();
  REQUIRE(run(second).code == 0);
  auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), {});
  };
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  CHECK(!fs::exists(dir / "a.json.tmp"));
  const json doc = json::parse(slurp(dir / "a.json"));
  CHECK(doc["data"]["phases"].size() == 60);
  CHECK(doc["data"]["degeneracy_classes"].size() == 30);
  for (const auto& cls : doc["data"]["degeneracy_classes"]) CHECK(cls.size() == 2);
  CHECK(doc["data"]["gap_at_zero"].get<double>() > 0.0);
  CHECK(doc["data"]["gap_at_pi"].get<double>() > 0.0);
  fs::remove_all(dir);
}

TEST_CASE("output directory from the environment") {
  const fs::path dir = scratch_dir("env");
  EnvGuard env(dir.string());
  REQUIRE(run({"grover2d", "--side", "4"}).code == 0);
  CHECK(fs::exists(dir / "grover2d.json"));
  REQUIRE(run({"grover2d", "--side", "2", "--output", "nested/g.csv", "--format", "csv"}).code == 0);
  CHECK(fs::exists(dir / "nested" / "g.csv"));
  fs::remove_all(dir);
}

TEST_CASE("sweep report") {
  const auto r = run({"sweep", "--n", "30", "--lambda-min", "0.005", "--lambda-max", "5", "--points", "40",
                      "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 41);
  CHECK(rows[0] == "lambda,peak_fidelity,peak_time");
  const auto j = json::parse(run({"sweep", "--points", "40"}).out);
  const double transition = j["data"]["detected_transition"].get<double>();
  CHECK(transition > kPi / 30 / 3);
  CHECK(transition < kPi / 30 * 3);
}

TEST_CASE("weak coupling, conversion and oracle reports") {
  const auto w = json::parse(run({"weakcoupling", "--epsilon", "pi/2N", "--steps", "1000"}).out);
  CHECK(w["meta"]["params"]["epsilon"].get<double>() == doctest::Approx(kPi / 60));
  CHECK(w["data"]["top4_population"].get<double>() >= 0.95);

  const auto c = json::parse(run({"convert", "--n", "30", "--lambda", "0.03"}).out);
  CHECK(c["data"]["coins"].size() == 30);
  CHECK(c["data"]["coins"][2]["theta"].get<double>() == doctest::Approx(std::atan(1.0 / (0.06 * std::sqrt(14.0)))));

  const fs::path dir = scratch_dir("convert");
  {
    std::ofstream f(dir / "h.json");
    f << R"({"diagonal": [0, 1, 0], "hopping": [[0.5, 0.5], 1.0]})";
  }
  const auto ci = run({"convert", "--input", (dir / "h.json").string()});
  REQUIRE(ci.code == 0);
  const auto cj = json::parse(ci.out);
  CHECK(cj["data"]["vector_potential_angles"][0].get<double>() == doctest::Approx(std::atan(0.5)));
  {
    std::ofstream f(dir / "bad.json");
    f << R"({"diagonal": [0, 1, 0], "hopping": [1.0]})";
  }
  const auto bad = run({"convert", "--input", (dir / "bad.json").string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("--input") != std::string::npos);
  fs::remove_all(dir);

  const auto o = json::parse(run({"oracle", "--n", "8", "--lambda", "0.5"}).out);
  CHECK(o["data"]["fidelity"].get<double>() >= 1 - 1e-8);
  const auto& exc = o["data"]["excitation"];
  const auto& walk = o["data"]["ctqw"];
  for (std::size_t s = 0; s < exc.size(); ++s) CHECK(std::abs(exc[s].get<double>() - walk[s].get<double>()) < 1e-8);
}

TEST_CASE("validation failures exit with code 2 and name the flag") {
  struct Case {
    std::vector<std::string> args;
    std::string flag;
  };
  const std::vector<Case> cases = {
      {{"simulate", "--n", "31"}, "--n"},
      {{"simulate", "--lambda", "-1"}, "--lambda"},
      {{"simulate", "--source", "2"}, "--source"},
      {{"simulate", "--target", "30"}, "--target"},
      {{"simulate", "--steps", "-3"}, "--steps"},
      {{"simulate", "--initial-coin", "custom", "--alpha", "0", "--beta", "0"}, "--alpha"},
      {{"simulate", "--initial-coin", "sideways"}, "--initial-coin"},
      {{"simulate", "--format", "xml"}, "--format"},
      {{"sweep", "--points", "0"}, "--points"},
      {{"sweep", "--lambda-min", "1", "--lambda-max", "0.5"}, "--lambda-max"},
      {{"weakcoupling", "--epsilon", "2"}, "--epsilon"},
      {{"grover2d", "--side", "5"}, "--side"},
      {{"oracle", "--couplings", "1,x"}, "--couplings"},
      {{"oracle", "--couplings", "1,2"}, "--time"},
  };
  for (const auto& c : cases) {
    const auto r = run(c.args);
    CHECK_MESSAGE(r.code == 2, c.args[0] << " " << c.flag);
    CHECK_MESSAGE(r.err.find(c.flag) != std::string::npos, r.err);
  }
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
}

TEST_CASE("ballistic simulate with sigma y coin map") {
  const auto r = json::parse(run({"simulate", "--protocol", "ballistic", "--steps", "15", "--initial-coin", "custom",
                                  "--alpha", "0.6", "--beta", "0,0.8", "--coin-map", "sigma-y"})
                                 .out);
  CHECK(r["data"]["peak_time"] == 15);
  CHECK(r["data"]["coin_fidelity_at_peak"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
}

}  // TEST_SUITE
